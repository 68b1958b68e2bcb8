//! Banded LU with partial pivoting, the Thomas algorithm and a natural cubic
//! spline.

/// Square matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i - kl ..= i + ku + kl`; the extra `kl` columns
/// hold fill-in produced by row interchanges during factorisation.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl, "({i}, {j}) outside band");
        i * self.width + (j + self.kl - i)
    }

    /// True when `(i, j)` lies inside the declared band.
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// `y = A x` over the declared band.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Factorises in place. Fails when a pivot column is numerically zero.
    pub fn factorize(mut self) -> Result<BandedLu, SingularMatrix> {
        let n = self.n;
        let kl = self.kl;
        let reach = self.ku + self.kl;
        let mut pivots = Vec::with_capacity(n);
        let mut multipliers = vec![0.0; n * kl.max(1)];
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE) * n as f64 * 1e-3;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for r in k + 1..=last_row {
                let v = self.get(r, k).abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if !(best > tiny) {
                return Err(SingularMatrix { column: k });
            }
            pivots.push(p);
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.get(k, k);
            for r in k + 1..=last_row {
                let factor = self.get(r, k) / pivot;
                multipliers[k * kl.max(1) + (r - k - 1)] = factor;
                if factor == 0.0 {
                    continue;
                }
                let s = self.slot(r, k);
                self.data[s] = 0.0;
                for j in k + 1..=last_col {
                    let v = self.get(k, j);
                    if v != 0.0 {
                        let s = self.slot(r, j);
                        self.data[s] -= factor * v;
                    }
                }
            }
        }
        Ok(BandedLu { upper: self, pivots, multipliers })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix {
    pub column: usize,
}

/// Factors of a [`BandedMatrix`]: the elimination steps and the upper factor.
#[derive(Debug, Clone)]
pub struct BandedLu {
    upper: BandedMatrix,
    pivots: Vec<usize>,
    multipliers: Vec<f64>,
}

impl BandedLu {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let u = &self.upper;
        let n = u.n;
        let kl = u.kl;
        let reach = u.ku + u.kl;
        let mut b = rhs.to_vec();
        for k in 0..n {
            b.swap(k, self.pivots[k]);
            let bk = b[k];
            if bk != 0.0 {
                for r in k + 1..=(k + kl).min(n - 1) {
                    b[r] -= self.multipliers[k * kl.max(1) + (r - k - 1)] * bk;
                }
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..=(i + reach).min(n - 1) {
                s -= u.get(i, j) * b[j];
            }
            b[i] = s / u.get(i, i);
        }
        b
    }
}

/// Solves a tridiagonal system; `lower[0]` and `upper[n - 1]` are ignored.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Natural cubic spline through `(x_i, y_i)` with strictly increasing `x`.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        assert_eq!(x.len(), y.len());
        assert!(x.len() >= 2, "a spline needs at least two knots");
        let n = x.len();
        let mut second = vec![0.0; n];
        if n > 2 {
            let m = n - 2;
            let mut lower = vec![0.0; m];
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                lower[i - 1] = h0;
                diag[i - 1] = 2.0 * (h0 + h1);
                upper[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            let inner = solve_tridiagonal(&lower, &diag, &upper, &rhs);
            second[1..n - 1].copy_from_slice(&inner);
        }
        Self { x: x.to_vec(), y: y.to_vec(), second }
    }

    /// Value at `t`, extrapolating with the end cubic pieces.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h / 6.0
    }
}

/// Piecewise-linear interpolation with constant extrapolation.
pub fn interp_linear(x: &[f64], y: &[f64], t: f64) -> f64 {
    let n = x.len();
    if t <= x[0] {
        return y[0];
    }
    if t >= x[n - 1] {
        return y[n - 1];
    }
    let k = x.partition_point(|&xi| xi <= t).clamp(1, n - 1);
    let s = (t - x[k - 1]) / (x[k] - x[k - 1]);
    y[k - 1] + s * (y[k] - y[k - 1])
}
