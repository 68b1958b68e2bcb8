//! Front positions from level crossings and speeds from their regression on time.

use super::{Profiles, SolverError, Snapshot};

/// First `x` where species `component` crosses `level`, linearly interpolated.
pub fn front_position(profiles: &Profiles, component: usize, level: f64) -> Option<f64> {
    let v = profiles.values.get(component)?;
    let x = &profiles.x;
    for i in 0..v.len() - 1 {
        let (a, b) = (v[i] - level, v[i + 1] - level);
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) {
            return Some(x[i] + a / (a - b) * (x[i + 1] - x[i]));
        }
    }
    None
}

/// Least-squares slope of front position against time.
///
/// `level` defaults to the midpoint of the first snapshot's boundary values
/// of species `component`.
pub fn estimate_speed(snapshots: &[Snapshot], component: usize, level: Option<f64>) -> Result<f64, SolverError> {
    if snapshots.len() < 3 {
        return Err(SolverError::TooFewSnapshots { needed: 3, got: snapshots.len() });
    }
    let first = &snapshots[0].profiles;
    if component >= first.species() {
        return Err(SolverError::InvalidInput(format!("no species with index {component}")));
    }
    let level = level.unwrap_or_else(|| {
        let v = &first.values[component];
        0.5 * (v[0] + v[v.len() - 1])
    });
    let mut ts = Vec::with_capacity(snapshots.len());
    let mut ps = Vec::with_capacity(snapshots.len());
    for (i, s) in snapshots.iter().enumerate() {
        let p = front_position(&s.profiles, component, level).ok_or(SolverError::NoCrossing { snapshot: i, level })?;
        ts.push(s.t);
        ps.push(p);
    }
    let m = ts.len() as f64;
    let t_mean = ts.iter().sum::<f64>() / m;
    let p_mean = ps.iter().sum::<f64>() / m;
    let sxx: f64 = ts.iter().map(|t| (t - t_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(SolverError::InvalidInput("snapshot times must not all coincide".into()));
    }
    let sxy: f64 = ts.iter().zip(&ps).map(|(t, p)| (t - t_mean) * (p - p_mean)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_grid;

    fn snapshot(t: f64, x: &[f64], f: impl Fn(f64) -> f64) -> Snapshot {
        let u: Vec<f64> = x.iter().map(|&s| f(s)).collect();
        let v: Vec<f64> = u.iter().map(|a| 1.0 - a).collect();
        Snapshot { t, profiles: Profiles::new(x.to_vec(), vec![u, v]).unwrap() }
    }

    #[test]
    fn translated_profile_speed() {
        let x = uniform_grid(20.0, 800);
        let snaps: Vec<Snapshot> = (0..6)
            .map(|j| {
                let t = j as f64;
                snapshot(t, &x, |s| 0.5 * (1.0 - (s - 0.5 * t - 0.013).tanh()))
            })
            .collect();
        let theta = estimate_speed(&snaps, 0, None).unwrap();
        assert!((theta - 0.5).abs() <= 1e-12, "{theta}");
    }

    #[test]
    fn stationary_front_has_zero_speed() {
        let x = uniform_grid(10.0, 100);
        let snaps: Vec<Snapshot> = (0..4).map(|j| snapshot(j as f64, &x, |s| 0.5 * (1.0 - s.tanh()))).collect();
        assert!(estimate_speed(&snaps, 0, None).unwrap().abs() <= 1e-15);
    }

    #[test]
    fn constant_snapshots_have_no_crossing() {
        let x = uniform_grid(10.0, 100);
        let snaps: Vec<Snapshot> = (0..3).map(|j| snapshot(j as f64, &x, |_| 0.3)).collect();
        assert!(matches!(estimate_speed(&snaps, 0, None), Err(SolverError::NoCrossing { snapshot: 0, .. })));
    }

    #[test]
    fn needs_three_snapshots() {
        let x = uniform_grid(10.0, 100);
        let snaps: Vec<Snapshot> = (0..2).map(|j| snapshot(j as f64, &x, |s| s)).collect();
        assert!(matches!(estimate_speed(&snaps, 0, None), Err(SolverError::TooFewSnapshots { .. })));
    }

    #[test]
    fn crossing_is_interpolated() {
        let p = Profiles::new(vec![0.0, 1.0, 2.0], vec![vec![1.0, 0.6, 0.2]]).unwrap();
        assert!((front_position(&p, 0, 0.5).unwrap() - 1.25).abs() < 1e-15);
        assert_eq!(front_position(&p, 0, 0.6), Some(1.0));
        assert_eq!(front_position(&p, 0, 2.0), None);
    }
}
