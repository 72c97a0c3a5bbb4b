//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Gauss-Legendre nodes and weights on [a, b] by Newton iteration on P_m.
pub fn gauss(m: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w));
    }
    out
}

/// P_k(x) and P_k'(x).
pub fn legendre(k: usize, x: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=k {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = if (1.0 - x * x).abs() < 1e-14 {
        0.5 * (k * (k + 1)) as f64 * x.powi(k as i32 + 1)
    } else {
        k as f64 * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, d)
}

pub fn sphere_volume(k: usize) -> f64 {
    // |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
    let half = (k + 1) as f64 / 2.0;
    let gamma = if (k + 1) % 2 == 0 {
        (1..k.div_ceil(2)).map(|j| j as f64).product::<f64>()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut s = 0.5;
        while s < half - 0.25 {
            g *= s;
            s += 1.0;
        }
        g
    };
    2.0 * std::f64::consts::PI.powf(half) / gamma
}

/// Rayleigh-Ritz data for azimuthal mode m on the cap of angle theta0
/// (`None` is the closed sphere) with basis sin^m(θ)·b(θ)·P_k(s(cos θ)),
/// where b vanishes on the cap boundary.
pub struct Galerkin {
    pub stiffness: DMatrix<f64>,
    pub mass: DMatrix<f64>,
    pub mean: DVector<f64>,
    /// vol(S^{n-2}), the factor between the reduced and the full integrals.
    pub omega: f64,
}

impl Galerkin {
    pub fn new(n: usize, theta0: Option<f64>, m: usize, size: usize) -> Self {
        let t_end = theta0.unwrap_or(std::f64::consts::PI);
        let x0 = t_end.cos();
        let kappa = (m * (m + n - 3)) as f64;
        let mut a = DMatrix::zeros(size, size);
        let mut b = DMatrix::zeros(size, size);
        let mut g = DVector::zeros(size);
        for (th, w) in gauss(240, 0.0, t_end) {
            let (s, c) = th.sin_cos();
            let weight = w * s.powi(n as i32 - 2);
            let scale = 2.0 / (1.0 - x0);
            let sv = scale * (c - x0) - 1.0;
            let (bf, dbf) = if theta0.is_some() { (c - x0, 1.0) } else { (1.0, 0.0) };
            let mut val = vec![0.0; size];
            let mut der = vec![0.0; size];
            for k in 0..size {
                let (p, dp) = legendre(k, sv);
                let gx = bf * p;
                let dgx = dbf * p + bf * dp * scale;
                let sm = s.powi(m as i32);
                val[k] = sm * gx;
                let dsm = if m == 0 { 0.0 } else { m as f64 * s.powi(m as i32 - 1) * c };
                der[k] = dsm * gx - sm * s * dgx;
            }
            for i in 0..size {
                g[i] += weight * val[i];
                for j in 0..size {
                    let pot = if m == 0 { 0.0 } else { kappa * val[i] * val[j] / (s * s) };
                    a[(i, j)] += weight * (der[i] * der[j] + pot);
                    b[(i, j)] += weight * val[i] * val[j];
                }
            }
        }
        Galerkin { stiffness: a, mass: b, mean: g, omega: sphere_volume(n - 2) }
    }

    /// Smallest eigenvalue of the pencil (A + penalty·ω·g gᵀ, B).
    pub fn lowest(&self, penalty: f64) -> f64 {
        let a = &self.stiffness + &self.mean * self.mean.transpose() * (penalty * self.omega);
        lowest_generalized(&a, &self.mass)
    }

    /// Smallest eigenvalue restricted to coefficient vectors with zero mean.
    pub fn lowest_mean_zero(&self) -> f64 {
        let k = self.mean.len();
        let g = &self.mean;
        let alpha = -g[0].signum() * g.norm();
        let mut v = g.clone();
        v[0] -= alpha;
        let h = DMatrix::identity(k, k) - &v * v.transpose() * (2.0 / v.norm_squared());
        let z = h.columns(1, k - 1).into_owned();
        lowest_generalized(&(z.transpose() * &self.stiffness * &z), &(z.transpose() * &self.mass * &z))
    }
}

pub fn lowest_generalized(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let l = b.clone().cholesky().expect("mass matrix is positive definite").l();
    let li = l.clone().try_inverse().expect("invertible Cholesky factor");
    let m = &li * a * li.transpose();
    let m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Θ(Ω) for a cap (or the sphere) from the Galerkin oracle: the mean-zero
/// axisymmetric minimum against the lowest eigenvalue of modes 1..=max_mode.
pub fn theta_oracle(n: usize, theta0: Option<f64>, max_mode: usize) -> f64 {
    let mut best = Galerkin::new(n, theta0, 0, 24).lowest_mean_zero();
    for m in 1..=max_mode {
        best = best.min(Galerkin::new(n, theta0, m, 24).lowest(0.0));
    }
    best
}
