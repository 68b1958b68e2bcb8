use std::sync::OnceLock;

use nbarrier::bounds::{bounds, BoundsResult, Weights};
use nbarrier::geometry::Region;
use nbarrier::model::{make_lotka_volterra, BoundaryState, LotkaVolterraParams, Speed, WaveProblem};
use nbarrier::solver::{solve_bvp, InitialGuess, NewtonOptions, WaveSolution};
use nbarrier::verify::{check_bounds, sweep_solution, weight_grid, RecordStatus, DEFAULT_GRID_VALUES, TOL_BVP};
use proptest::prelude::*;

fn symmetric_wave() -> &'static WaveSolution {
    static WAVE: OnceLock<WaveSolution> = OnceLock::new();
    WAVE.get_or_init(|| {
        let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let system = make_lotka_volterra(&params, &[1.0, 1.0]).unwrap();
        let st = |p: &[f64]| BoundaryState::from_point(p, 1e-9).unwrap();
        let p = WaveProblem::new(system, st(&[1.0, 0.0]), st(&[0.0, 1.0]), Speed::Fixed(0.0), 30.0, 600).unwrap();
        solve_bvp(&p, &InitialGuess::default(), &NewtonOptions::default()).unwrap()
    })
}

fn unit_region() -> Region {
    Region::new(vec![1.0, 1.0], vec![0.5, 0.5]).unwrap()
}

fn w(v: &[f64]) -> Weights {
    Weights::new(v.to_vec()).unwrap()
}

/// min over the grid of u + v for the symmetric bistable wave, frozen after the first computation.
const SYMMETRIC_MIN_P: f64 = 0.728_691_368_270_415_8;

#[test]
fn symmetric_wave_passes_unit_weights() {
    let wave = symmetric_wave();
    let b = bounds(&w(&[1.0, 1.0]), &[1.0, 1.0], &unit_region(), 1).unwrap();
    let r = check_bounds(&wave.profiles, &w(&[1.0, 1.0]), &b, TOL_BVP).unwrap();
    assert_eq!(r.status, RecordStatus::Pass);
    assert_eq!(r.observed_max_p, 1.0);
}

#[test]
fn adversarial_bounds_fail() {
    let wave = symmetric_wave();
    let b = bounds(&w(&[1.0, 1.0]), &[1.0, 1.0], &unit_region(), 1).unwrap();
    let tight = BoundsResult { p_lower: 0.9, p_upper: 1.0, ..b };
    let r = check_bounds(&wave.profiles, &w(&[1.0, 1.0]), &tight, TOL_BVP).unwrap();
    assert_eq!(r.status, RecordStatus::Fail);
    assert!(r.observed_min_p < 0.9);
    assert!((r.observed_min_p - SYMMETRIC_MIN_P).abs() <= 1e-9, "{:.17}", r.observed_min_p);
}

#[test]
fn default_sweep_passes() {
    let grid = weight_grid(&DEFAULT_GRID_VALUES, 2).unwrap();
    let report = sweep_solution(symmetric_wave(), &unit_region(), &grid, TOL_BVP).unwrap();
    assert_eq!(report.records.len(), 25);
    assert!(report.passed());
    assert_eq!(report.chi, 1);
}

#[test]
fn far_field_attains_upper_bound() {
    let wave = symmetric_wave();
    for weights in weight_grid(&DEFAULT_GRID_VALUES, 2).unwrap() {
        let b = bounds(&weights, &[1.0, 1.0], &unit_region(), 1).unwrap();
        let r = check_bounds(&wave.profiles, &weights, &b, TOL_BVP).unwrap();
        let endpoint = weights.as_slice()[0].max(weights.as_slice()[1]);
        assert!(r.observed_max_p >= endpoint - 1e-12);
        assert_eq!(r.p_upper, endpoint);
    }
}

#[test]
fn reports_are_deterministic() {
    let grid = weight_grid(&DEFAULT_GRID_VALUES, 2).unwrap();
    let a = sweep_solution(symmetric_wave(), &unit_region(), &grid, TOL_BVP).unwrap();
    let b = sweep_solution(symmetric_wave(), &unit_region(), &grid, TOL_BVP).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv(), b.to_csv());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn status_is_scale_invariant(alpha in 0.05f64..20.0, beta in 0.05f64..20.0, c in 0.01f64..100.0) {
        let wave = symmetric_wave();
        let base = w(&[alpha, beta]);
        let scaled = base.scaled(c).unwrap();
        let region = unit_region();
        let b0 = bounds(&base, &[1.0, 1.0], &region, 1).unwrap();
        let b1 = bounds(&scaled, &[1.0, 1.0], &region, 1).unwrap();
        let r0 = check_bounds(&wave.profiles, &base, &b0, 0.0).unwrap();
        let r1 = check_bounds(&wave.profiles, &scaled, &b1, 0.0).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1e-300);
        prop_assert!(rel(r1.observed_min_p, c * r0.observed_min_p));
        prop_assert!(rel(r1.observed_max_p, c * r0.observed_max_p));
        prop_assert!(rel(r1.p_upper, c * r0.p_upper));
        prop_assert!(rel(r1.p_lower, c * r0.p_lower));
        prop_assert_eq!(r0.status, r1.status);
    }
}
