//! Three-zone model of the gradient bounds for the Green's kernel of a cone.
//!
//! For a boundary point ξ and an interior point x the zones are
//! E1: 2|x| < |ξ|, E3: 2|ξ| < |x|, and the closed middle band E2 otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::pencil::StripReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Zone {
    E1,
    E2,
    E3,
}

/// Which bound is used in the middle zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MiddleZoneBound {
    /// c R(x) / |x - ξ|^n, the normal-derivative form.
    NormalDerivative,
    /// c |x - ξ|^{-(n-1)}, the raw gradient form.
    RawGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundModel {
    pub n: usize,
    pub alpha: f64,
    pub c: f64,
    pub delta: f64,
    pub middle: MiddleZoneBound,
    /// Decay exponent of the far-zone bound; alpha + n - 1 for a consistent model.
    e1_decay: f64,
}

impl KernelBoundModel {
    pub fn new(n: usize, alpha: f64, c: f64, delta: f64) -> Result<Self> {
        if n < 3 {
            return Err(ConeError::Domain(format!("dimension n = {n} must be at least 3")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ConeError::Domain(format!("alpha = {alpha} must lie in (0, 1]")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(ConeError::Domain(format!("bound constant c = {c} must be positive")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(ConeError::Domain(format!("radius delta = {delta} must be positive")));
        }
        Ok(KernelBoundModel {
            n,
            alpha,
            c,
            delta,
            middle: MiddleZoneBound::NormalDerivative,
            e1_decay: alpha + n as f64 - 1.0,
        })
    }

    pub fn from_strip(strip: &StripReport, c: f64, delta: f64) -> Result<Self> {
        KernelBoundModel::new(strip.n, strip.alpha, c, delta)
    }

    pub fn with_middle(mut self, middle: MiddleZoneBound) -> Self {
        self.middle = middle;
        self
    }

    /// A deliberately inconsistent model whose far-zone decay is alpha + n;
    /// it breaks the homogeneity of the bound and serves as a negative control.
    pub fn tampered(mut self) -> Self {
        self.e1_decay = self.alpha + self.n as f64;
        self
    }

    pub fn e1_decay(&self) -> f64 {
        self.e1_decay
    }
}

pub fn classify_zone(x_norm: f64, xi_norm: f64) -> Zone {
    if 2.0 * x_norm < xi_norm {
        Zone::E1
    } else if 2.0 * xi_norm < x_norm {
        Zone::E3
    } else {
        Zone::E2
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Gradient bound of the kernel at (x, ξ); `r_x` is dist(x, ∂D).
pub fn kernel_gradient_bound(x: &[f64], xi: &[f64], r_x: f64, model: &KernelBoundModel) -> Result<f64> {
    if x.len() != xi.len() {
        return Err(ConeError::Precondition("points of different dimension".into()));
    }
    let d = distance(x, xi);
    if d == 0.0 {
        return Err(ConeError::Singular("kernel bound evaluated at x = xi".into()));
    }
    let nx = norm(x);
    let nxi = norm(xi);
    let nf = model.n as f64;
    let a = model.alpha;
    Ok(match classify_zone(nx, nxi) {
        Zone::E1 => model.c * nx.powf(a) * nxi.powf(-model.e1_decay),
        Zone::E2 => match model.middle {
            MiddleZoneBound::NormalDerivative => model.c * r_x / d.powf(nf),
            MiddleZoneBound::RawGradient => model.c * d.powf(1.0 - nf),
        },
        Zone::E3 => model.c * nxi.powf(a - 1.0) * nx.powf(-(a + nf - 2.0)),
    })
}

/// Checks bound(s x, s ξ, s R) = s^{1-n} bound(x, ξ, R) to 1e-12 relative, with R = |x|/2.
pub fn homogeneity_identity_check(x: &[f64], xi: &[f64], s: f64, model: &KernelBoundModel) -> bool {
    if !(s > 0.0) {
        return false;
    }
    let r = norm(x) / 2.0;
    let sx: Vec<f64> = x.iter().map(|v| s * v).collect();
    let sxi: Vec<f64> = xi.iter().map(|v| s * v).collect();
    match (kernel_gradient_bound(x, xi, r, model), kernel_gradient_bound(&sx, &sxi, s * r, model)) {
        (Ok(b), Ok(sb)) => {
            let expected = s.powf(1.0 - model.n as f64) * b;
            (sb - expected).abs() <= 1e-12 * expected.abs()
        }
        _ => false,
    }
}

/// Bound on the ratio (either way) of the far/near-zone bounds to the raw
/// middle-zone bound at points of the zone boundaries |ξ| = 2|x| and |x| = 2|ξ|.
pub fn adjacent_zone_constant(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    // |ξ| = 2|x|: E1 = 2^{-(alpha+n-1)}|x|^{1-n}, |x - ξ| in [|x|, 3|x|]
    let e1_lo = 2f64.powf(-(alpha + nf - 1.0));
    let e1_hi = e1_lo * 3f64.powf(nf - 1.0);
    // |x| = 2|ξ|: E3 = 2^{1-alpha}|x|^{1-n}, |x - ξ| in [|x|/2, 3|x|/2]
    let e3_lo = 2f64.powf(1.0 - alpha) * 2f64.powf(1.0 - nf);
    let e3_hi = 2f64.powf(1.0 - alpha) * 1.5f64.powf(nf - 1.0);
    [e1_hi, 1.0 / e1_lo, e3_hi, 1.0 / e3_lo].into_iter().fold(0.0, f64::max)
}
