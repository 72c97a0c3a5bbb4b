//! Pressure recovered from the radial profile of a pencil eigenfunction:
//! p = -(3 - 4nu - l)^{-1} (Δ u_r + (l + 1)(l + n - 1) u_r).

use num_complex::Complex64;

use crate::error::{ConeError, Result};

/// A mode-`mode` profile sampled on the uniform colatitude nodes k θ0 / N, k = 0..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub n: usize,
    pub theta0: f64,
    pub mode: usize,
    pub values: Vec<Complex64>,
}

impl SampledProfile {
    pub fn from_fn<F: Fn(f64) -> Complex64>(n: usize, theta0: f64, mode: usize, nodes: usize, f: F) -> Self {
        let h = theta0 / (nodes - 1) as f64;
        SampledProfile { n, theta0, mode, values: (0..nodes).map(|k| f(k as f64 * h)).collect() }
    }

    pub fn spacing(&self) -> f64 {
        self.theta0 / (self.values.len() - 1) as f64
    }

    /// Fourth-order Laplace–Beltrami of the mode-`mode` field f(θ) Y. Stencils
    /// reaching past the pole use the parity f(-θ) = (-1)^mode f(θ); the last
    /// two nodes use one-sided stencils.
    pub fn laplace_beltrami(&self) -> Result<Vec<Complex64>> {
        let f = &self.values;
        let len = f.len();
        if len < 6 {
            return Err(ConeError::Precondition("profile needs at least six samples".into()));
        }
        let h = self.spacing();
        let nm2 = self.n as f64 - 2.0;
        let kappa = (self.mode * (self.mode + self.n - 3)) as f64;
        let parity = if self.mode % 2 == 0 { 1.0 } else { -1.0 };
        let at = |k: isize| if k < 0 { f[(-k) as usize] * parity } else { f[k as usize] };
        let last = len - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for i in 1..len {
            let k = i as isize;
            let (d1, d2) = if i + 2 <= last {
                (
                    (-at(k + 2) + at(k + 1) * 8.0 - at(k - 1) * 8.0 + at(k - 2)) / (12.0 * h),
                    (-at(k + 2) + at(k + 1) * 16.0 - at(k) * 30.0 + at(k - 1) * 16.0 - at(k - 2)) / (12.0 * h * h),
                )
            } else {
                let g = |j: usize| f[last - j];
                if i == last {
                    (
                        (g(0) * 25.0 - g(1) * 48.0 + g(2) * 36.0 - g(3) * 16.0 + g(4) * 3.0) / (12.0 * h),
                        (g(0) * 45.0 - g(1) * 154.0 + g(2) * 214.0 - g(3) * 156.0 + g(4) * 61.0 - g(5) * 10.0)
                            / (12.0 * h * h),
                    )
                } else {
                    (
                        (g(0) * 3.0 + g(1) * 10.0 - g(2) * 18.0 + g(3) * 6.0 - g(4)) / (12.0 * h),
                        (g(0) * 10.0 - g(1) * 15.0 - g(2) * 4.0 + g(3) * 14.0 - g(4) * 6.0 + g(5)) / (12.0 * h * h),
                    )
                }
            };
            let s = (i as f64 * h).sin();
            out[i] = d2 + d1 * (nm2 * (i as f64 * h).cos() / s) - f[i] * (kappa / (s * s));
        }
        out[0] = if self.mode == 0 {
            // Δf(0) = (n-1) f''(0) for an even profile
            (f[1] * 32.0 - f[0] * 30.0 - f[2] * 2.0) * ((self.n as f64 - 1.0) / (12.0 * h * h))
        } else {
            // a smooth field of nonzero mode has a profile vanishing at the pole
            Complex64::new(0.0, 0.0)
        };
        Ok(out)
    }
}

/// Nodewise pressure from the radial profile at λ; fails on λ = 3 - 4nu.
pub fn pressure_from_ur(ur: &SampledProfile, lambda: Complex64, nu: f64) -> Result<SampledProfile> {
    let denom = Complex64::new(3.0 - 4.0 * nu, 0.0) - lambda;
    if denom.norm() == 0.0 {
        return Err(ConeError::Singular(format!("lambda = 3 - 4 nu = {lambda} makes the pressure formula singular")));
    }
    let nf = ur.n as f64;
    let shift = (lambda + 1.0) * (lambda + nf - 1.0);
    let lap = ur.laplace_beltrami()?;
    let values = lap.iter().zip(&ur.values).map(|(l, u)| -(l + shift * u) / denom).collect();
    Ok(SampledProfile { values, ..ur.clone() })
}
