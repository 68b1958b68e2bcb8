#![allow(dead_code)]

use nbarrier::model::{make_lotka_volterra, LotkaVolterraParams, ReactionSystem};

/// Objective values `(sum upper_k, sum lower_k)` of the tightest two-species
/// band around `points`, found by a dense scan over the first reciprocal
/// intercept followed by golden-section refinement.
pub fn brute_force_fit_2d(points: &[[f64; 2]]) -> (f64, f64) {
    let a1_max = points.iter().filter(|p| p[0] > 0.0).map(|p| 1.0 / p[0]).fold(f64::INFINITY, f64::min);
    let a2_for = |a1: f64| {
        points.iter().filter(|p| p[1] > 0.0).map(|p| (1.0 - p[0] * a1) / p[1]).fold(f64::INFINITY, f64::min)
    };
    let upper_obj = |a1: f64| {
        let a2 = a2_for(a1);
        if a1 <= 0.0 || a2 <= 0.0 {
            f64::INFINITY
        } else {
            1.0 / a1 + 1.0 / a2
        }
    };
    let a1 = scan_min(upper_obj, 0.0, a1_max);
    let (a1, a2) = (a1, a2_for(a1));

    let b2_for = |b1: f64| {
        points
            .iter()
            .filter(|p| p[1] > 0.0)
            .map(|p| (1.0 - p[0] * b1) / p[1])
            .fold(a2, f64::max)
    };
    let feasible_axis = |b1: f64| points.iter().filter(|p| p[1] == 0.0).all(|p| p[0] * b1 >= 1.0 - 1e-12);
    let lower_obj = |b1: f64| {
        if b1 < a1 || !feasible_axis(b1) {
            return f64::NEG_INFINITY;
        }
        1.0 / b1 + 1.0 / b2_for(b1)
    };
    let b1_max = points.iter().filter(|p| p[0] > 0.0).map(|p| 1.0 / p[0]).fold(a1, f64::max) * 4.0;
    let b1 = scan_min(|b| -lower_obj(b), a1, b1_max);
    (1.0 / a1 + 1.0 / a2, lower_obj(b1))
}

fn scan_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const SCAN: usize = 20_000;
    let h = (hi - lo) / SCAN as f64;
    let mut best = lo;
    let mut best_val = f(lo);
    for i in 1..=SCAN {
        let t = lo + h * i as f64;
        let v = f(t);
        if v < best_val {
            best = t;
            best_val = v;
        }
    }
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) <= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    if f(mid) <= best_val {
        mid
    } else {
        best
    }
}

/// Strongly competing two-species Lotka-Volterra system with unit self-competition.
pub fn strong_competition(sigma: [f64; 2], excess: [f64; 2], d: [f64; 2]) -> ReactionSystem {
    let c12 = sigma[0] / sigma[1] * (1.0 + excess[0]);
    let c21 = sigma[1] / sigma[0] * (1.0 + excess[1]);
    let params = LotkaVolterraParams::new(sigma.to_vec(), vec![vec![1.0, c12], vec![c21, 1.0]]).unwrap();
    make_lotka_volterra(&params, &d).unwrap()
}
