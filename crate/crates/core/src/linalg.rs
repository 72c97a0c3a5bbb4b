//! Small dense-free linear algebra kernels: symmetric tridiagonal eigenvalues by
//! Sturm bisection, pivoted tridiagonal and banded solves, and a Lanczos
//! iteration in a weighted inner product.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{ConeError, Result};

/// Real symmetric tridiagonal matrix stored by its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1));
        SymTridiagonal { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let qq = if q.abs() < tiny { tiny.copysign(q) } else { q };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / qq;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to machine precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim());
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale * 1e-2 {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Infinity norm (equal to the 1-norm by symmetry).
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Solves (T - mu I) x = rhs with partial pivoting.
    pub fn solve_shifted(&self, mu: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let sub: Vec<f64> = self.off.clone();
        let diag: Vec<f64> = self.diag.iter().map(|d| d - mu).collect();
        solve_tridiagonal(sub, diag, self.off.clone(), rhs.to_vec())
    }

    /// Eigenvector for a converged eigenvalue by inverse iteration, unit 2-norm.
    pub fn eigenvector(&self, eigenvalue: f64) -> Result<Vec<f64>> {
        let n = self.dim();
        let shift = eigenvalue + 1e3 * f64::EPSILON * self.norm_inf().max(1.0);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i as f64) * 0.618).sin()).collect();
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x)?;
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(ConeError::Numerical("inverse iteration broke down".into()));
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(x)
    }
}

/// General tridiagonal solve with partial pivoting (sub, diag, super diagonals).
pub fn solve_tridiagonal(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    let singular = || ConeError::Numerical("singular tridiagonal system".into());
    if n == 0 {
        return Ok(b);
    }
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return Err(singular());
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        return Err(singular());
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
    }
    Ok(b)
}

/// Complex band matrix with `kl` sub- and `ku` super-diagonals, stored row-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix { n, kl, ku, data: vec![Complex64::new(0.0, 0.0); n * (kl + ku + 1)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BandMatrix::zeros(n, 0, 0);
        for i in 0..n {
            m.add(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * self.width() + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if self.in_band(i, j) {
            self.data[self.index(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Adds `v` at (i, j); panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(self.in_band(i, j), "entry ({i},{j}) outside band");
        let k = self.index(i, j);
        self.data[k] += v;
    }

    /// self += c * other, for matrices of identical shape.
    pub fn axpy(&mut self, c: Complex64, other: &BandMatrix) {
        assert_eq!((self.n, self.kl, self.ku), (other.n, other.kl, other.ku));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(n - 1);
                (lo..=hi).map(|j| self.data[self.index(i, j)] * x[j]).sum()
            })
            .collect()
    }

    pub fn conj_transpose(&self) -> BandMatrix {
        let mut t = BandMatrix::zeros(self.n, self.ku, self.kl);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                t.add(j, i, self.get(i, j).conj());
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// LU factorization with partial pivoting; fill-in widens the upper band to kl + ku.
    pub fn lu(&self) -> Result<BandLu> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.kl + self.ku;
        let mut f = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(n.saturating_sub(1));
            for j in lo..=hi {
                let k = f.index(i, j);
                f.data[k] = self.data[self.index(i, j)];
            }
        }
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = f.get(k, k).norm();
            for i in k + 1..=last {
                let v = f.get(i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= f64::EPSILON * 1e-6 * scale {
                return Err(ConeError::Numerical(format!("band LU: zero pivot at column {k}")));
            }
            piv[k] = p;
            let jmax = (k + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let a = f.index(k, j);
                    let b = f.index(p, j);
                    f.data.swap(a, b);
                }
            }
            let pivot = f.get(k, k);
            for i in k + 1..=last {
                let li = f.index(i, k);
                let l = f.data[li] / pivot;
                f.data[li] = l;
                if l == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..=jmax {
                    let kj = f.data[f.index(k, j)];
                    let ij = f.index(i, j);
                    f.data[ij] -= l * kj;
                }
            }
        }
        Ok(BandLu { factors: f, piv })
    }
}

/// Pivoted band LU factors.
#[derive(Debug, Clone)]
pub struct BandLu {
    factors: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let f = &self.factors;
        let n = f.n;
        let mut b = rhs.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in k + 1..=(k + f.kl).min(n - 1) {
                b[i] -= f.data[f.index(i, k)] * bk;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + f.ku).min(n - 1) {
                s -= f.data[f.index(k, j)] * b[j];
            }
            b[k] = s / f.data[f.index(k, k)];
        }
        b
    }
}

/// Largest eigenvalue of an operator self-adjoint in the inner product
/// <x, y> = x^H G y, where `metric` applies the Hermitian positive definite G;
/// Lanczos with full reorthogonalization.
///
/// Stops when the Ritz residual falls below `tol` relative to the Ritz value, or
/// when the top Ritz value has moved by less than `tol` over five steps (a
/// tight cluster at the top of the spectrum).
pub fn lanczos_largest<A, G>(dim: usize, mut apply: A, metric: G, tol: f64, max_iter: usize) -> Result<f64>
where
    A: FnMut(&[Complex64]) -> Vec<Complex64>,
    G: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if dim == 0 {
        return Err(ConeError::Numerical("Lanczos on an empty space".into()));
    }
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 { x.iter().zip(y).map(|(a, b)| a.conj() * b).sum() };
    let mut q: Vec<Complex64> = (0..dim)
        .map(|i| {
            let t = i as f64;
            Complex64::new(1.0 + 0.5 * (0.7548776662 * t).sin(), 0.3 * (1.3247 * t).cos())
        })
        .collect();
    let mut gq = metric(&q);
    let q_norm = dot(&q, &gq).re.max(0.0).sqrt();
    q.iter_mut().for_each(|v| *v /= q_norm);
    gq.iter_mut().for_each(|v| *v /= q_norm);
    // basis vectors and their images under G, so inner products are plain dots
    let mut basis: Vec<Vec<Complex64>> = vec![q];
    let mut metric_basis: Vec<Vec<Complex64>> = vec![gq];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut history: Vec<f64> = Vec::new();
    let steps = max_iter.min(dim);
    for j in 0..steps {
        let mut w = apply(&basis[j]);
        if w.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(ConeError::Numerical("Lanczos produced non-finite vector".into()));
        }
        alpha.push(dot(&metric_basis[j], &w).re);
        for _ in 0..2 {
            for (qi, gqi) in basis.iter().zip(&metric_basis) {
                let c = dot(gqi, &w);
                w.iter_mut().zip(qi).for_each(|(wv, qv)| *wv -= c * qv);
            }
        }
        let gw = metric(&w);
        let b = dot(&w, &gw).re.max(0.0).sqrt();
        let tri = SymTridiagonal::new(alpha.clone(), beta.clone());
        let m = alpha.len();
        let theta = tri.eigenvalue(m - 1);
        let last = if m == 1 { 1.0 } else { tri.eigenvector(theta).map(|v| v[m - 1].abs()).unwrap_or(1.0) };
        let resid = b * last;
        history.push(theta);
        let stalled = j >= 10 && (theta - history[j - 5]).abs() <= tol * theta.abs();
        if resid <= tol * theta.abs() || stalled || b <= 1e-14 * theta.abs().max(1e-300) || j + 1 == steps {
            return Ok(theta);
        }
        beta.push(b);
        basis.push(w.iter().map(|v| v / b).collect());
        metric_basis.push(gw.iter().map(|v| v / b).collect());
    }
    Ok(*history.last().expect("at least one Lanczos step"))
}
