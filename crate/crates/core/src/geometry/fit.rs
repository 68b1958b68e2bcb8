//! Tightest enclosing band around a point cloud.
//!
//! With reciprocal intercepts `a_k = 1 / upper_k` and `b_k = 1 / lower_k`
//! the containment constraints become linear:
//!
//! ```text
//! upper:  minimise sum_k 1/a_k  subject to  P . a <= 1  for every sample P
//! lower:  maximise sum_k 1/b_k  subject to  P . b >= 1  and  b_k >= a_k
//! ```
//!
//! The upper objective is convex, so its optimum is the stationary point of
//! some active set of at most `n` samples. The lower objective is convex and
//! maximised, so its optimum is a vertex. Both are solved exactly over a
//! small candidate set by enumerating active sets, then checked against every
//! sample; the worst violator joins the candidates until nothing is violated.
//! Since the candidate problem is a relaxation, a solution feasible for all
//! samples is optimal.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use super::{FieldLabel, GeometryError, NullclineSample, Region};

const FEAS_TOL: f64 = 1e-12;

/// Fits the tightest [`Region`] around the `f`, `g` (and `h`) samples.
/// Combined-field samples are ignored. `margin` then inflates the upper
/// intercepts by `1 + margin` and deflates the lower ones by `1 - margin`.
pub fn fit_region(samples: &[NullclineSample], margin: f64) -> Result<Region, GeometryError> {
    let points: Vec<&[f64]> = samples
        .iter()
        .filter(|s| s.label != FieldLabel::Combined)
        .flat_map(|s| s.points.iter().map(Vec::as_slice))
        .collect();
    fit_points(&points, margin)
}

/// [`fit_region`] on a bare point cloud.
pub fn fit_points<P: AsRef<[f64]>>(points: &[P], margin: f64) -> Result<Region, GeometryError> {
    let points: Vec<&[f64]> = points.iter().map(AsRef::as_ref).collect();
    let first = points.first().ok_or(GeometryError::EmptySamples)?;
    let n = first.len();
    if !(n == 2 || n == 3) {
        return Err(GeometryError::InvalidArgument(format!("points must have 2 or 3 coordinates, got {n}")));
    }
    for p in &points {
        if p.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: p.len() });
        }
        if p.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(GeometryError::InvalidArgument(format!("sample {p:?} is outside the orthant")));
        }
    }
    if !(margin.is_finite() && (0.0..1.0).contains(&margin)) {
        return Err(GeometryError::InvalidArgument(format!("margin {margin} must lie in [0, 1)")));
    }

    let a = fit_upper(&points, n)?;
    let b = fit_lower(&points, &a, n)?;
    let upper = a.iter().map(|a| (1.0 + margin) / a).collect();
    let lower = b.iter().map(|b| (1.0 - margin) / b).collect();
    Region::new(upper, lower)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Positive probe directions spread over the simplex, including near-axis ones.
fn probe_directions(n: usize) -> Vec<Vec<f64>> {
    const DIVISIONS: usize = 12;
    const FLOOR: f64 = 1e-3;
    let mut dirs = Vec::new();
    match n {
        2 => {
            for i in 0..=DIVISIONS {
                let t = i as f64 / DIVISIONS as f64;
                dirs.push(vec![t.max(FLOOR), (1.0 - t).max(FLOOR)]);
            }
        }
        _ => {
            for i in 0..=DIVISIONS {
                for j in 0..=(DIVISIONS - i) {
                    let k = DIVISIONS - i - j;
                    dirs.push(
                        [i, j, k]
                            .iter()
                            .map(|&c| (c as f64 / DIVISIONS as f64).max(FLOOR))
                            .collect(),
                    );
                }
            }
        }
    }
    dirs
}

fn extreme_index(points: &[&[f64]], dir: &[f64], maximise: bool) -> usize {
    let mut best = 0;
    let mut best_val = dot(points[0], dir);
    for (i, p) in points.iter().enumerate().skip(1) {
        let v = dot(p, dir);
        if (maximise && v > best_val) || (!maximise && v < best_val) {
            best = i;
            best_val = v;
        }
    }
    best
}

/// Calls `visit` with every `k`-subset of `0..m` in lexicographic order.
fn for_each_combination(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Solves the square system `rows x = rhs`, rejecting near-singular matrices.
fn solve_square(rows: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let scale: f64 = rows.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt()).product();
    let lu = m.lu();
    if !(lu.determinant().abs() > 1e-13 * scale) {
        return None;
    }
    let x = lu.solve(&DVector::from_column_slice(rhs))?;
    let x: Vec<f64> = x.iter().copied().collect();
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn cross(p: &[f64], q: &[f64]) -> [f64; 3] {
    [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]]
}

/// Minimiser of `sum 1/a_k` over the line `{p . a = 1, q . a = 1}` in three
/// dimensions, restricted to `a > 0`.
fn minimise_on_line(p: &[f64], q: &[f64]) -> Option<Vec<f64>> {
    let d = cross(p, q);
    let dn = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    let pn = dot(p, p).sqrt();
    let qn = dot(q, q).sqrt();
    if !(dn > 1e-12 * pn * qn) {
        return None;
    }
    // minimum-norm point of the line: a0 = A^T (A A^T)^{-1} 1
    let (pp, pq, qq) = (dot(p, p), dot(p, q), dot(q, q));
    let det = pp * qq - pq * pq;
    let y0 = (qq - pq) / det;
    let y1 = (pp - pq) / det;
    let a0: Vec<f64> = (0..3).map(|k| y0 * p[k] + y1 * q[k]).collect();

    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 0..3 {
        if d[k] > 0.0 {
            lo = lo.max(-a0[k] / d[k]);
        } else if d[k] < 0.0 {
            hi = hi.min(-a0[k] / d[k]);
        } else if a0[k] <= 0.0 {
            return None;
        }
    }
    // an unbounded side means the objective is monotone and has no minimiser
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return None;
    }
    let slope = |t: f64| -> f64 { (0..3).map(|k| -d[k] / (a0[k] + t * d[k]).powi(2)).sum() };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let a: Vec<f64> = (0..3).map(|k| a0[k] + t * d[k]).collect();
    a.iter().all(|&v| v > 0.0 && v.is_finite()).then_some(a)
}

/// Stationary point of the upper objective with the given samples active.
fn upper_candidate(active: &[&[f64]], n: usize) -> Option<Vec<f64>> {
    let a = match active.len() {
        1 => {
            let p = active[0];
            if p.iter().any(|&x| x <= 0.0) {
                return None;
            }
            let s: f64 = p.iter().map(|x| x.sqrt()).sum();
            p.iter().map(|x| 1.0 / (x.sqrt() * s)).collect()
        }
        len if len == n => solve_square(active, &vec![1.0; n])?,
        2 => minimise_on_line(active[0], active[1])?,
        _ => return None,
    };
    a.iter().all(|&v| v > 0.0 && v.is_finite()).then_some(a)
}

fn objective(recip: &[f64]) -> f64 {
    recip.iter().map(|v| 1.0 / v).sum()
}

fn solve_upper_relaxed(cands: &[&[f64]], n: usize) -> Option<Vec<f64>> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for size in 1..=n {
        for_each_combination(cands.len(), size, |idx| {
            let active: Vec<&[f64]> = idx.iter().map(|&i| cands[i]).collect();
            let Some(a) = upper_candidate(&active, n) else { return };
            if cands.iter().any(|p| dot(p, &a) > 1.0 + FEAS_TOL) {
                return;
            }
            let obj = objective(&a);
            if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                best = Some((obj, a));
            }
        });
    }
    best.map(|(_, a)| a)
}

fn fit_upper(points: &[&[f64]], n: usize) -> Result<Vec<f64>, GeometryError> {
    for axis in 0..n {
        if points.iter().all(|p| p[axis] <= 0.0) {
            return Err(GeometryError::DegenerateFit {
                axis,
                reason: "no sample leaves the coordinate hyperplane, so the upper intercept would be zero".into(),
                witness: points[0].to_vec(),
            });
        }
    }
    let mut cands: BTreeSet<usize> = probe_directions(n)
        .iter()
        .map(|dir| extreme_index(points, dir, true))
        .collect();
    for axis in 0..n {
        let mut dir = vec![1e-9; n];
        dir[axis] = 1.0;
        cands.insert(extreme_index(points, &dir, true));
    }
    loop {
        let active: Vec<&[f64]> = cands.iter().map(|&i| points[i]).collect();
        let a = solve_upper_relaxed(&active, n).ok_or_else(|| GeometryError::DegenerateFit {
            axis: 0,
            reason: "upper fit has no finite optimum".into(),
            witness: points[0].to_vec(),
        })?;
        let (worst, excess) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(p, &a) - 1.0))
            .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if excess <= FEAS_TOL || !cands.insert(worst) {
            return Ok(a);
        }
    }
}

fn solve_lower_relaxed(cands: &[&[f64]], caps: &[f64], n: usize) -> Option<Vec<f64>> {
    let unit: Vec<Vec<f64>> = (0..n)
        .map(|k| (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
        .collect();
    let rows: Vec<(&[f64], f64)> = cands
        .iter()
        .map(|p| (*p, 1.0))
        .chain(unit.iter().zip(caps).map(|(e, &c)| (e.as_slice(), c)))
        .collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for_each_combination(rows.len(), n, |idx| {
        let mat: Vec<&[f64]> = idx.iter().map(|&i| rows[i].0).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| rows[i].1).collect();
        let Some(b) = solve_square(&mat, &rhs) else { return };
        if b.iter().zip(caps).any(|(v, c)| *v < c * (1.0 - FEAS_TOL)) {
            return;
        }
        if cands.iter().any(|p| dot(p, &b) < 1.0 - FEAS_TOL) {
            return;
        }
        let obj = objective(&b);
        if best.as_ref().is_none_or(|(o, _)| obj > *o) {
            best = Some((obj, b));
        }
    });
    best.map(|(_, b)| b)
}

fn fit_lower(points: &[&[f64]], caps: &[f64], n: usize) -> Result<Vec<f64>, GeometryError> {
    if let Some(origin) = points.iter().find(|p| p.iter().all(|&x| x <= 0.0)) {
        return Err(GeometryError::DegenerateFit {
            axis: 0,
            reason: "a sample sits at the origin, so no lower hyperplane can pass below it".into(),
            witness: origin.to_vec(),
        });
    }
    let mut cands: BTreeSet<usize> = probe_directions(n)
        .iter()
        .map(|dir| extreme_index(points, dir, false))
        .collect();
    loop {
        let active: Vec<&[f64]> = cands.iter().map(|&i| points[i]).collect();
        let b = solve_lower_relaxed(&active, caps, n).ok_or_else(|| GeometryError::DegenerateFit {
            axis: 0,
            reason: "lower fit has no feasible vertex".into(),
            witness: points[0].to_vec(),
        })?;
        let (worst, deficit) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, 1.0 - dot(p, &b)))
            .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if deficit <= FEAS_TOL || !cands.insert(worst) {
            return Ok(b);
        }
    }
}
