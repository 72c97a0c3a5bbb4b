//! The cubic phi(t), its root t(M), and the eigenvalue-free strip it defines.

use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};

/// Poisson ratio; nu = 1/2 is the incompressible (Stokes) case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub nu: f64,
}

impl MaterialParams {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu > 0.5 {
            return Err(ConeError::Domain(format!("Poisson ratio nu = {nu} must be finite and at most 1/2")));
        }
        Ok(MaterialParams { nu })
    }

    pub fn stokes() -> Self {
        MaterialParams { nu: 0.5 }
    }

    pub fn is_stokes(&self) -> bool {
        self.nu == 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiContext {
    pub n: usize,
    pub nu: f64,
    pub m: f64,
}

impl PhiContext {
    pub fn new(n: usize, nu: f64, m: f64) -> Result<Self> {
        if n < 3 {
            return Err(ConeError::Domain(format!("dimension n = {n} must be at least 3")));
        }
        MaterialParams::new(nu)?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(ConeError::Domain(format!("exponent M = {m} must be positive")));
        }
        Ok(PhiContext { n, nu, m })
    }
}

/// phi(t) = (t+1)(t+n-1)(2t+n-2) - (3-4nu-t)(M-t)(M+t+n-2).
pub fn phi_eval(t: f64, ctx: &PhiContext) -> f64 {
    let n = ctx.n as f64;
    let m = ctx.m;
    (t + 1.0) * (t + n - 1.0) * (2.0 * t + n - 2.0) - (3.0 - 4.0 * ctx.nu - t) * (m - t) * (m + t + n - 2.0)
}

/// phi(t) - (n-1)(2t+n-2); t(M) is its smallest zero above -(n-2)/2.
pub fn phi_excess(t: f64, ctx: &PhiContext) -> f64 {
    let n = ctx.n as f64;
    phi_eval(t, ctx) - (n - 1.0) * (2.0 * t + n - 2.0)
}

pub const DEFAULT_SUBINTERVALS: usize = 10_000;

pub fn t_of_m(ctx: &PhiContext) -> Result<f64> {
    t_of_m_with(ctx, DEFAULT_SUBINTERVALS)
}

/// Smallest root of phi(t) = (n-1)(2t+n-2) in (-(n-2)/2, M) by dense
/// sign-change bracketing followed by bisection to 1e-12.
pub fn t_of_m_with(ctx: &PhiContext, subintervals: usize) -> Result<f64> {
    let lo = -(ctx.n as f64 - 2.0) / 2.0;
    let hi = ctx.m;
    let step = (hi - lo) / subintervals as f64;
    let at = |k: usize| if k == subintervals { hi } else { lo + step * k as f64 };
    let mut prev_t = at(0);
    let mut prev = phi_excess(prev_t, ctx);
    let mut bracket = None;
    for k in 1..=subintervals {
        let t = at(k);
        let v = phi_excess(t, ctx);
        if k < subintervals && v == 0.0 {
            bracket = Some((t, t));
            break;
        }
        if prev < 0.0 && v > 0.0 || prev > 0.0 && v < 0.0 {
            bracket = Some((prev_t, t));
            break;
        }
        prev_t = t;
        prev = v;
    }
    let (mut a, mut b) = bracket.ok_or_else(|| ConeError::NoBracket {
        samples: (0..=10)
            .map(|k| {
                let t = lo + (hi - lo) * k as f64 / 10.0;
                (t, phi_excess(t, ctx))
            })
            .collect(),
    })?;
    let fa = phi_excess(a, ctx);
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        let fm = phi_excess(mid, ctx);
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    if !(root > 0.0) {
        return Err(ConeError::Numerical(format!(
            "phi root t = {root} is not positive; the excess changes sign on (-(n-2)/2, 0]"
        )));
    }
    Ok(root)
}

/// Strip |Re l + (n-2)/2| < halfwidth free of pencil eigenvalues, and the
/// solvability threshold p_min.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub n: usize,
    pub t_of_m: f64,
    pub alpha: f64,
    pub halfwidth: f64,
    pub p_min: f64,
}

impl StripReport {
    pub fn from_root(n: usize, t_of_m: f64) -> Result<Self> {
        if !(t_of_m > 0.0) {
            return Err(ConeError::Precondition(format!("t(M) = {t_of_m} must be positive")));
        }
        let nf = n as f64;
        let alpha = t_of_m.min(1.0);
        Ok(StripReport {
            n,
            t_of_m,
            alpha,
            halfwidth: alpha + (nf - 2.0) / 2.0,
            p_min: (nf - 1.0) / (alpha + nf - 2.0),
        })
    }

    /// Center of the strip on the real axis, -(n-2)/2.
    pub fn center(&self) -> f64 {
        -(self.n as f64 - 2.0) / 2.0
    }

    pub fn contains(&self, re: f64) -> bool {
        (re - self.center()).abs() < self.halfwidth
    }
}

pub fn strip_report(ctx: &PhiContext) -> Result<StripReport> {
    StripReport::from_root(ctx.n, t_of_m(ctx)?)
}
