//! A-priori bounds for traveling waves of two- and three-species
//! competition-diffusion systems.
//!
//! For `d_k u_k'' + theta u_k' + u_k g_k(u) = 0` connecting two equilibria,
//! every weighted sum `p = sum_k w_k u_k` of a positive wave is bounded by
//! `p_lower <= p(x) <= p_upper`, with constants built from a region that
//! encloses all growth nullclines. The crate provides:
//!
//! - [`model`]: reaction systems (Lotka-Volterra or tabulated), boundary states, wave problems;
//! - [`geometry`]: nullcline sampling and the tightest enclosing region;
//! - [`hypotheses`]: the structural checks that make the bounds applicable;
//! - [`bounds`](mod@bounds): the closed-form bounds for given weights and diffusion rates;
//! - [`solver`]: Newton solvers for the wave boundary-value problem and an IMEX time march;
//! - [`verify`]: sweeps of computed profiles against the bounds over a weight grid;
//! - [`cli`]: the `check | bounds | solve | verify` command-line frontend.

pub mod bounds;
pub mod cli;
pub mod geometry;
pub mod hypotheses;
pub mod model;
pub mod solver;
pub mod verify;

pub use bounds::{bounds, BoundsResult, Weights};
pub use geometry::Region;
pub use hypotheses::{verify_hypotheses, HypothesisOptions, HypothesisReport};
pub use model::{BoundaryState, ReactionSystem, Speed, WaveProblem};
pub use solver::{Profiles, WaveSolution};
pub use verify::VerificationReport;
