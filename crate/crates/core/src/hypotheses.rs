//! Numerical checks of the structural hypotheses on the growth fields.
//!
//! Two-species systems are checked against `H1`..`H4`, three-species systems
//! against `A1`..`A4`:
//!
//! | id       | property                                                        |
//! |----------|-----------------------------------------------------------------|
//! | H1 / A1  | exactly one positive common zero of all growth fields           |
//! | H2 / A2  | each field has exactly one positive root on each axis           |
//! | H3 / A3  | fields positive near the origin, negative far out               |
//! | H4 / A4  | every nullcline lies in the band between the fitted hyperplanes |
//!
//! Every verdict is relative to the sampling resolution recorded in the
//! report: "pass" means "unique at that resolution", never a proof.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::geometry::{contains, fit_region, roots_on_scan, sample_nullclines, NodeGrid, NullclineSample, Region};
use crate::model::ReactionSystem;

/// Coexistence roots closer than this (max-norm) are one cluster.
pub const CLUSTER_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        }
    }
}

/// Verdict of one check. Failures always carry at least one witness point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub status: Status,
    pub witness: Vec<Vec<f64>>,
    pub message: String,
}

impl Check {
    fn pass(message: impl Into<String>) -> Self {
        Self { status: Status::Pass, witness: Vec::new(), message: message.into() }
    }

    fn fail(witness: Vec<Vec<f64>>, message: impl Into<String>) -> Self {
        assert!(!witness.is_empty(), "a failed check needs a witness");
        Self { status: Status::Fail, witness, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoexistenceCheck {
    pub check: Check,
    /// One representative per root cluster.
    pub roots: Vec<Vec<f64>>,
}

impl CoexistenceCheck {
    /// The unique coexistence state, when the check passed.
    pub fn root(&self) -> Option<&[f64]> {
        (self.check.status == Status::Pass).then(|| self.roots[0].as_slice())
    }
}

/// Residual-minimising polish (Levenberg-Marquardt with finite-difference
/// Jacobian) of a common zero of all growth fields.
fn polish_root(system: &ReactionSystem, start: &[f64], step: f64, tol: f64) -> Option<Vec<f64>> {
    let n = system.species();
    let residual = |x: &[f64]| -> Vec<f64> { (0..n).map(|k| system.field(k, x)).collect() };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut x = start.to_vec();
    let mut r = residual(&x);
    let mut lambda = 1e-10;
    for _ in 0..100 {
        if norm(&r) <= tol * 1e-3 {
            return Some(x);
        }
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += step;
            xm[j] -= step;
            let (rp, rm) = (residual(&xp), residual(&xm));
            for i in 0..n {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * step);
            }
        }
        let jt = jac.transpose();
        let rhs = -(&jt * DVector::from_column_slice(&r));
        let jtj = &jt * &jac;
        let scale = jtj.diagonal().amax().max(1e-300);
        let mut improved = false;
        for _ in 0..40 {
            let damped = &jtj + DMatrix::identity(n, n) * (lambda * scale);
            let Some(delta) = damped.lu().solve(&rhs) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            let rt = residual(&trial);
            if norm(&rt) < norm(&r) {
                x = trial;
                r = rt;
                lambda = (lambda * 0.1).max(1e-14);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (norm(&r) <= tol).then_some(x)
}

/// Searches the box for positive common zeros of all growth fields: grid
/// cells where every field takes both signs seed a polish, and polished roots
/// are clustered with radius [`CLUSTER_RADIUS`]. Passes iff there is exactly
/// one cluster.
pub fn check_coexistence_root(system: &ReactionSystem, bbox: &[f64], resolution: usize, tol: f64) -> CoexistenceCheck {
    let n = system.species();
    let grid = match NodeGrid::new(bbox, resolution) {
        Ok(g) if bbox.len() == n => g,
        _ => {
            return CoexistenceCheck {
                check: Check::fail(vec![bbox.to_vec()], format!("invalid search box {bbox:?}")),
                roots: Vec::new(),
            }
        }
    };
    let values: Vec<Vec<f64>> = (0..n).map(|k| grid.values(&|p: &[f64]| system.field(k, p))).collect();
    let scale = bbox.iter().fold(0.0f64, |m, b| m.max(*b));
    let step = 1e-6 * scale;
    let offsets: Vec<usize> = (0..(1usize << n))
        .map(|corner| (0..n).filter(|k| (corner >> k) & 1 == 1).map(|k| grid.stride(k)).sum())
        .collect();

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    let mut best = (f64::INFINITY, 0usize);
    for flat in 0..grid.len() {
        let total: f64 = values.iter().map(|v| v[flat].abs()).sum();
        if total < best.0 {
            best = (total, flat);
        }
        if (0..n).any(|k| grid.index(flat, k) + 1 >= resolution) {
            continue;
        }
        let straddles = values.iter().all(|v| {
            let (lo, hi) = offsets
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &o| (lo.min(v[flat + o]), hi.max(v[flat + o])));
            lo <= 0.0 && hi >= 0.0
        });
        if !straddles {
            continue;
        }
        let centre: Vec<f64> = grid.point(flat).iter().zip(bbox).map(|(x, b)| x + 0.5 * b / (resolution - 1) as f64).collect();
        let Some(root) = polish_root(system, &centre, step, tol) else { continue };
        let inside = root.iter().zip(bbox).all(|(x, b)| *x > tol && *x <= b * (1.0 + 1e-9));
        if !inside {
            continue;
        }
        let known = clusters
            .iter()
            .any(|c| c.iter().zip(&root).all(|(a, b)| (a - b).abs() <= CLUSTER_RADIUS));
        if !known {
            clusters.push(root);
        }
    }
    let check = match clusters.len() {
        1 => Check::pass(format!("unique coexistence state {:?}", clusters[0])),
        0 => Check::fail(vec![grid.point(best.1)], "no positive common zero of the growth fields"),
        m => Check::fail(clusters.clone(), format!("{m} distinct positive common zeros")),
    };
    CoexistenceCheck { check, roots: clusters }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisRootCheck {
    pub check: Check,
    /// `roots[field][axis]`: every positive root of growth field `field`
    /// restricted to coordinate axis `axis`.
    pub roots: Vec<Vec<Vec<f64>>>,
}

impl AxisRootCheck {
    /// The root of `field` on `axis`, when it is unique.
    pub fn unique(&self, field: usize, axis: usize) -> Option<f64> {
        match self.roots[field][axis].as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    /// The exclusive-state roots: field `k` on axis `k`.
    pub fn diagonal(&self) -> Vec<Option<f64>> {
        (0..self.roots.len()).map(|k| self.unique(k, k)).collect()
    }

    fn all_roots(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().flatten().flatten().copied()
    }
}

/// Scan points on `(0, limit]`: geometric near zero, then uniform.
fn axis_scan(limit: f64, resolution: usize) -> Vec<f64> {
    let m = resolution.max(16);
    let mut ts: Vec<f64> = (0..m).map(|i| limit * 1e-8f64.powf(1.0 - i as f64 / m as f64)).collect();
    ts.extend((1..=m).map(|i| limit * i as f64 / m as f64));
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();
    ts
}

/// Finds the positive roots of every growth field along every coordinate
/// axis within `(0, limit]`. Passes iff each is unique; for three species it
/// additionally requires that, on each axis, the roots of the three fields
/// are not all equal.
pub fn check_axis_roots(system: &ReactionSystem, limit: f64, resolution: usize, tol: f64) -> AxisRootCheck {
    let n = system.species();
    let ts = axis_scan(limit, resolution);
    let roots: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|axis| {
                    let at = |t: f64| {
                        let mut p = vec![0.0; n];
                        p[axis] = t;
                        system.field(k, &p)
                    };
                    roots_on_scan(at, &ts).into_iter().filter(|&t| t > 0.0).collect()
                })
                .collect()
        })
        .collect();
    let names = ["u", "v", "w"];
    let mut problems = Vec::new();
    let mut witness = Vec::new();
    for (k, per_axis) in roots.iter().enumerate() {
        for (axis, found) in per_axis.iter().enumerate() {
            if found.len() != 1 {
                problems.push(format!("field {} has {} roots on the {}-axis", k + 1, found.len(), names[axis]));
                let t = found.first().copied().unwrap_or(limit);
                let mut p = vec![0.0; n];
                p[axis] = t;
                witness.push(p);
            }
        }
    }
    if n == 3 && problems.is_empty() {
        for axis in 0..n {
            let r: Vec<f64> = (0..n).map(|k| roots[k][axis][0]).collect();
            let spread = (r[0] - r[1]).powi(2) + (r[0] - r[2]).powi(2) + (r[1] - r[2]).powi(2);
            if spread <= tol * tol {
                problems.push(format!("all three fields share the {}-axis root {}", names[axis], r[0]));
                let mut p = vec![0.0; n];
                p[axis] = r[0];
                witness.push(p);
            }
        }
    }
    let check = if problems.is_empty() {
        Check::pass("every axis root is unique")
    } else {
        Check::fail(witness, problems.join("; "))
    };
    AxisRootCheck { check, roots }
}

/// Positive on `(0, small]^n` and negative on `[large, 2 large]^n`, probed on
/// `per_axis` points per coordinate.
pub fn check_sign_behavior(system: &ReactionSystem, small: f64, large: f64, per_axis: usize) -> Check {
    let n = system.species();
    if !(small > 0.0 && large > small && small.is_finite() && large.is_finite()) {
        return Check::fail(vec![vec![small; n]], format!("need 0 < small < large, got {small}, {large}"));
    }
    let m = per_axis.max(2);
    let probe = |lo: f64, hi: f64, want_positive: bool| -> Option<Vec<f64>> {
        let total = m.pow(n as u32);
        for flat in 0..total {
            let p: Vec<f64> = (0..n)
                .map(|k| {
                    let i = (flat / m.pow(k as u32)) % m;
                    lo + (hi - lo) * (i + 1) as f64 / m as f64
                })
                .collect();
            for k in 0..n {
                let v = system.field(k, &p);
                let ok = if want_positive { v > 0.0 } else { v < 0.0 };
                if !ok {
                    return Some(p);
                }
            }
        }
        None
    };
    if let Some(p) = probe(0.0, small, true) {
        return Check::fail(vec![p], format!("a growth field is not positive on (0, {small}]"));
    }
    // [large, 2 large] including the left end
    if let Some(p) = probe(large - large / m as f64, 2.0 * large, false) {
        return Check::fail(vec![p], format!("a growth field is not negative on [{large}, {}]", 2.0 * large));
    }
    Check::pass(format!("positive on (0, {small}], negative on [{large}, {}]", 2.0 * large))
}

/// Every nullcline sample must be inside the region or on its boundary.
/// The witness of a failure is the sample furthest outside.
pub fn check_containment(region: &Region, samples: &[NullclineSample]) -> Check {
    let mut worst: Option<(f64, &Vec<f64>)> = None;
    let mut outside = 0usize;
    for p in samples.iter().flat_map(|s| &s.points) {
        if contains(region, p).is_contained() {
            continue;
        }
        outside += 1;
        let excess = (region.upper_sum(p) - 1.0).max(1.0 - region.lower_sum(p));
        if worst.is_none_or(|(e, _)| excess > e) {
            worst = Some((excess, p));
        }
    }
    match worst {
        None => Check::pass("all nullcline samples are inside the region"),
        Some((excess, p)) => Check::fail(
            vec![p.clone()],
            format!("{outside} nullcline samples outside the region (worst excess {excess:e})"),
        ),
    }
}

/// Knobs of [`verify_hypotheses`]. `None` fields are derived from the axis roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypothesisOptions {
    /// Per-axis box; default twice the largest axis root.
    pub bounding_box: Option<Vec<f64>>,
    /// Grid points per axis for sampling and the coexistence search.
    pub resolution: Option<usize>,
    pub band_tol: f64,
    pub margin: f64,
    /// Root residual and positivity threshold.
    pub tol: f64,
    pub small: Option<f64>,
    pub large: Option<f64>,
    /// Search limit for axis roots when no box is given.
    pub axis_search_limit: f64,
}

impl Default for HypothesisOptions {
    fn default() -> Self {
        Self {
            bounding_box: None,
            resolution: None,
            band_tol: 1e-10,
            margin: 0.0,
            tol: 1e-9,
            small: None,
            large: None,
            axis_search_limit: 1e3,
        }
    }
}

pub fn default_resolution(species: usize) -> usize {
    if species == 2 {
        201
    } else {
        41
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisEntry {
    pub id: String,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub system: String,
    pub species: usize,
    pub entries: Vec<HypothesisEntry>,
    pub coexistence: Option<Vec<f64>>,
    pub axis_roots: Vec<Vec<Vec<f64>>>,
    /// Fitted region, present when the containment hypothesis passes.
    pub region: Option<Region>,
    pub bounding_box: Vec<f64>,
    pub resolution: usize,
    pub band_tol: f64,
    pub tol: f64,
    pub margin: f64,
    pub small: f64,
    pub large: f64,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.check.status == Status::Pass)
    }

    pub fn entry(&self, id: &str) -> Option<&HypothesisEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Plain-text table, one row per hypothesis.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<4} {:<13} message", "id", "status");
        for e in &self.entries {
            let _ = writeln!(out, "{:<4} {:<13} {}", e.id, e.check.status.as_str(), e.check.message);
        }
        if let Some(r) = &self.region {
            let _ = writeln!(out, "region: upper {:?}, lower {:?}", r.upper, r.lower);
        }
        out
    }
}

/// Runs the four checks (`H` family for two species, `A` family for three)
/// and fits the enclosing region.
pub fn verify_hypotheses(system: &ReactionSystem, options: &HypothesisOptions) -> HypothesisReport {
    let n = system.species();
    let prefix = if n == 2 { "H" } else { "A" };
    let resolution = options.resolution.unwrap_or_else(|| default_resolution(n));

    let axis_limit = options
        .bounding_box
        .as_ref()
        .map_or(options.axis_search_limit, |b| b.iter().fold(0.0f64, |m, x| m.max(*x)));
    let axis = check_axis_roots(system, axis_limit, resolution.max(1001), 1e-14);
    let (root_min, root_max) = axis
        .all_roots()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let have_roots = root_max > 0.0;
    let bbox = options
        .bounding_box
        .clone()
        .unwrap_or_else(|| vec![if have_roots { 2.0 * root_max } else { 10.0 }; n]);
    let small = options.small.unwrap_or(if have_roots { 0.01 * root_min } else { 0.01 });
    let large = options.large.unwrap_or(if have_roots { 2.0 * root_max } else { 10.0 });

    let coexistence = check_coexistence_root(system, &bbox, resolution, options.tol);

    let mut sign = check_sign_behavior(system, small, large, 8);
    if sign.status == Status::Fail {
        let wider = check_sign_behavior(system, small / 10.0, large * 10.0, 8);
        if wider.status == Status::Pass {
            sign = Check {
                status: Status::Indeterminate,
                witness: sign.witness,
                message: format!("{}; passes on a 10x wider scan", sign.message),
            };
        }
    }

    let (containment, region) = match sample_nullclines(system, &bbox, resolution, options.band_tol) {
        Err(e) => {
            let witness = match &e {
                crate::geometry::GeometryError::EmptyNullcline { closest, .. } => closest.clone(),
                _ => bbox.clone(),
            };
            (Check::fail(vec![witness], e.to_string()), None)
        }
        Ok(samples) => match fit_region(&samples, options.margin) {
            Err(e) => {
                let witness = match &e {
                    crate::geometry::GeometryError::DegenerateFit { witness, .. } => witness.clone(),
                    crate::geometry::GeometryError::OrderViolation { axis, upper, .. } => {
                        let mut p = vec![0.0; n];
                        p[*axis] = *upper;
                        p
                    }
                    _ => bbox.clone(),
                };
                (Check::fail(vec![witness], e.to_string()), None)
            }
            Ok(region) => {
                let check = check_containment(&region, &samples);
                let keep = (check.status == Status::Pass).then_some(region);
                (check, keep)
            }
        },
    };

    let entries = [coexistence.check.clone(), axis.check.clone(), sign, containment]
        .into_iter()
        .enumerate()
        .map(|(i, check)| HypothesisEntry { id: format!("{prefix}{}", i + 1), check })
        .collect();
    HypothesisReport {
        system: system.name().to_string(),
        species: n,
        entries,
        coexistence: coexistence.root().map(<[f64]>::to_vec),
        axis_roots: axis.roots,
        region,
        bounding_box: bbox,
        resolution,
        band_tol: options.band_tol,
        tol: options.tol,
        margin: options.margin,
        small,
        large,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_lotka_volterra, Growth, LotkaVolterraParams};

    fn lv(sigma: Vec<f64>, c: Vec<Vec<f64>>) -> ReactionSystem {
        let n = sigma.len();
        make_lotka_volterra(&LotkaVolterraParams::new(sigma, c).unwrap(), &vec![1.0; n]).unwrap()
    }

    fn bistable() -> ReactionSystem {
        lv(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]])
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn coexistence_examples() {
        let c = check_coexistence_root(&bistable(), &[2.0, 2.0], 201, 1e-9);
        assert_eq!(c.check.status, Status::Pass);
        assert!(close(c.root().unwrap(), &[1.0 / 3.0, 1.0 / 3.0], 1e-10));

        let weak = lv(vec![1.0, 1.0], vec![vec![1.0, 0.5], vec![0.5, 1.0]]);
        let c = check_coexistence_root(&weak, &[2.0, 2.0], 201, 1e-9);
        assert!(close(c.root().unwrap(), &[2.0 / 3.0, 2.0 / 3.0], 1e-10));

        let f = || Growth::custom(|p| 1.0 - p[0] - p[1]);
        let coincident = ReactionSystem::new("coincident", vec![f(), f()], &[1.0, 1.0]).unwrap();
        let c = check_coexistence_root(&coincident, &[2.0, 2.0], 51, 1e-9);
        assert_eq!(c.check.status, Status::Fail);
        assert!(c.roots.len() > 1);
    }

    #[test]
    fn axis_root_examples() {
        let a = check_axis_roots(&bistable(), 1e3, 1001, 1e-14);
        assert_eq!(a.check.status, Status::Pass);
        let expect = [[1.0, 0.5], [0.5, 1.0]];
        for k in 0..2 {
            for axis in 0..2 {
                assert!((a.unique(k, axis).unwrap() - expect[k][axis]).abs() < 1e-12);
            }
        }

        let same_rows = lv(vec![1.0; 3], vec![vec![1.0, 2.0, 2.0]; 3]);
        let a = check_axis_roots(&same_rows, 1e3, 1001, 1e-14);
        assert_eq!(a.check.status, Status::Fail);
        assert!(a.check.message.contains("share"));

        let double = ReactionSystem::new(
            "double",
            vec![Growth::custom(|p| (1.0 - p[0]) * (2.0 - p[0]) - p[1]), Growth::custom(|p| 1.0 - p[0] - p[1])],
            &[1.0, 1.0],
        )
        .unwrap();
        let a = check_axis_roots(&double, 1e3, 1001, 1e-14);
        assert_eq!(a.check.status, Status::Fail);
        assert_eq!(a.roots[0][0].len(), 2);
    }

    #[test]
    fn sign_examples() {
        assert_eq!(check_sign_behavior(&bistable(), 0.005, 2.0, 8).status, Status::Pass);
        let neg = ReactionSystem::new("neg", vec![Growth::custom(|_| -1.0), Growth::custom(|_| -1.0)], &[1.0, 1.0])
            .unwrap();
        assert_eq!(check_sign_behavior(&neg, 0.005, 2.0, 8).status, Status::Fail);
        let pos = ReactionSystem::new("pos", vec![Growth::custom(|_| 1.0), Growth::custom(|_| 1.0)], &[1.0, 1.0])
            .unwrap();
        let c = check_sign_behavior(&pos, 0.005, 2.0, 8);
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness.len(), 1);
    }

    #[test]
    fn containment_examples() {
        let samples = sample_nullclines(&bistable(), &[2.0, 2.0], 201, 1e-10).unwrap();
        let fitted = Region::new(vec![1.01, 1.01], vec![0.495, 0.495]).unwrap();
        assert_eq!(check_containment(&fitted, &samples).status, Status::Pass);
        let tight = Region::new(vec![0.9, 0.9], vec![0.5, 0.5]).unwrap();
        let c = check_containment(&tight, &samples);
        assert_eq!(c.status, Status::Fail);
        assert!(close(&c.witness[0], &[1.0, 0.0], 1e-6), "{:?}", c.witness);
    }

    #[test]
    fn bistable_report_passes() {
        let report = verify_hypotheses(&bistable(), &HypothesisOptions::default());
        assert!(report.all_pass(), "{}", report.to_table());
        assert_eq!(report.bounding_box, vec![2.0, 2.0]);
        let ids: Vec<&str> = report.entries.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["H1", "H2", "H3", "H4"]);
        let region = report.region.as_ref().unwrap();
        assert!(close(&region.upper, &[1.0, 1.0], 1e-9) && close(&region.lower, &[0.5, 0.5], 1e-9));
        assert_eq!(report, verify_hypotheses(&bistable(), &HypothesisOptions::default()));
    }

    #[test]
    fn decoupled_system_is_flagged() {
        let sys = ReactionSystem::new(
            "decoupled",
            vec![Growth::custom(|p| 1.0 - p[0]), Growth::custom(|p| 1.0 - p[1])],
            &[1.0, 1.0],
        )
        .unwrap();
        let report = verify_hypotheses(&sys, &HypothesisOptions::default());
        assert!(!report.all_pass());
        assert_eq!(report.entry("H2").unwrap().check.status, Status::Fail);
        for e in &report.entries {
            if e.check.status == Status::Fail {
                assert!(!e.check.witness.is_empty());
            }
        }
    }

    #[test]
    fn three_species_report_passes() {
        let sys = lv(vec![1.0; 3], vec![vec![1.0, 2.0, 2.0], vec![2.0, 1.0, 2.0], vec![2.0, 2.0, 1.0]]);
        let report = verify_hypotheses(&sys, &HypothesisOptions::default());
        assert!(report.all_pass(), "{}", report.to_table());
        assert_eq!(report.entries[0].id, "A1");
        assert!(close(report.coexistence.as_ref().unwrap(), &[0.2, 0.2, 0.2], 1e-10));
    }

    #[test]
    fn indeterminate_when_only_a_wider_scan_passes() {
        let slow = || Growth::custom(|p| 1.0 - 0.1 * (p[0] + p[1]));
        let sys = ReactionSystem::new("slow", vec![slow(), slow()], &[1.0, 1.0]).unwrap();
        assert_eq!(check_sign_behavior(&sys, 0.005, 2.0, 8).status, Status::Fail);
        assert_eq!(check_sign_behavior(&sys, 0.0005, 20.0, 8).status, Status::Pass);
        let options = HypothesisOptions { small: Some(0.005), large: Some(2.0), ..Default::default() };
        let report = verify_hypotheses(&sys, &options);
        assert_eq!(report.entry("H3").unwrap().check.status, Status::Indeterminate);
    }
}
