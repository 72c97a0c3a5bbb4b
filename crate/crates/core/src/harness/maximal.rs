//! Nontangential cones and maximal-function surrogates of the potentials.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::BoundaryData;
use super::mesh::{norm3, ConeBoundary};
use super::norms::{lp_norm, weak_lp_quasinorm};
use super::potentials::PotentialField;
use crate::error::{ConeError, Result};
use crate::green_model::KernelBoundModel;

pub const DEFAULT_NEAR_CUTOFF: f64 = 0.25;

/// Interior approach region Γ(x): points y with |y - x| ≤ height and
/// dist(y, ∂D) ≥ aperture·|y - x|, sampled deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NontangentialCone {
    pub aperture: f64,
    pub height: f64,
    pub samples: usize,
    /// Samples keep |y - x| ≥ near_cutoff·|x|, so the sampled region is scale invariant
    /// and does not move with the mesh.
    pub near_cutoff: f64,
}

impl NontangentialCone {
    pub fn new(aperture: f64, height: f64, samples: usize) -> Result<Self> {
        if !(aperture > 0.0 && aperture < 1.0) {
            return Err(ConeError::Precondition(format!("aperture {aperture} must lie in (0, 1)")));
        }
        if !(height > 0.0 && height.is_finite()) || samples == 0 {
            return Err(ConeError::Precondition(format!("invalid cone height {height} or sample count {samples}")));
        }
        Ok(NontangentialCone { aperture, height, samples, near_cutoff: DEFAULT_NEAR_CUTOFF })
    }

    pub fn with_near_cutoff(mut self, near_cutoff: f64) -> Self {
        self.near_cutoff = near_cutoff;
        self
    }

    /// Aperture 1/2, height δ/4, 64 samples.
    pub fn standard(delta: f64) -> Self {
        NontangentialCone { aperture: 0.5, height: 0.25 * delta, samples: 64, near_cutoff: DEFAULT_NEAR_CUTOFF }
    }

    /// Interior sample points of Γ(x) for the mesh point with index `index`.
    ///
    /// Directions make an angle γ with the inward normal where cos γ is
    /// uniform in [aperture, 1]; distances are log-uniform between
    /// max(near_cutoff·|x|, twice the local spacing) and the height. Points outside D or too close to ∂D are dropped.
    pub fn sample_points(&self, bnd: &ConeBoundary, index: usize) -> Vec<[f64; 3]> {
        let pt = &bnd.points[index];
        let t_lo = (self.near_cutoff * pt.radius).max(2.0 * pt.spacing);
        if t_lo >= self.height {
            return Vec::new();
        }
        let nrm = pt.normal;
        let (e1, e2) = orthonormal_complement(&nrm);
        let ratio = self.height / t_lo;
        (1..=self.samples)
            .filter_map(|i| {
                let t = t_lo * ratio.powf(radical_inverse(i, 2));
                let cg = self.aperture + (1.0 - self.aperture) * radical_inverse(i, 3);
                let sg = (1.0 - cg * cg).max(0.0).sqrt();
                let (sp, cp) = (2.0 * PI * radical_inverse(i, 5)).sin_cos();
                let mut y = [0.0; 3];
                for k in 0..3 {
                    let dir = cg * nrm[k] + sg * (cp * e1[k] + sp * e2[k]);
                    y[k] = pt.position[k] + t * dir;
                }
                (bnd.contains(&y) && bnd.boundary_distance(&y) >= self.aperture * t).then_some(y)
            })
            .collect()
    }
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

fn orthonormal_complement(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let a = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = a[0] * n[0] + a[1] * n[1] + a[2] * n[2];
    let mut e1 = [a[0] - d * n[0], a[1] - d * n[1], a[2] - d * n[2]];
    let l = norm3(&e1);
    e1.iter_mut().for_each(|v| *v /= l);
    let e2 = [n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]];
    (e1, e2)
}

/// Which potentials to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    pub v1: bool,
    pub v2: bool,
    pub v3: bool,
}

impl Components {
    pub const ALL: Components = Components { v1: true, v2: true, v3: true };
}

/// Maximal surrogates at one boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PointStars {
    pub v1_star: f64,
    pub v2_star: f64,
    pub v3_star: f64,
    /// Supremum of v2 over the part of the cone with |y - x| ≤ |x|.
    pub w: f64,
    /// Supremum of v2 over the part of the cone with |y - x| > |x|.
    pub z: f64,
    /// Supremum of v1 + v2 + v3 over the cone.
    pub u_star: f64,
}

/// Maximal surrogates at mesh point `index`; `None` when the cone has no interior samples.
pub fn maximal_surrogate(
    field: &PotentialField<'_>,
    index: usize,
    cone: &NontangentialCone,
    components: Components,
) -> Result<Option<PointStars>> {
    let bnd = field.boundary();
    let samples = cone.sample_points(bnd, index);
    if samples.is_empty() {
        return Ok(None);
    }
    let x = bnd.points[index].position;
    let rx = bnd.points[index].radius;
    let mut s = PointStars::default();
    for y in &samples {
        let v1 = if components.v1 { field.v1(y)? } else { 0.0 };
        let v2 = if components.v2 { field.v2(y)? } else { 0.0 };
        let v3 = if components.v3 { field.v3(y)? } else { 0.0 };
        s.v1_star = s.v1_star.max(v1);
        s.v2_star = s.v2_star.max(v2);
        s.v3_star = s.v3_star.max(v3);
        s.u_star = s.u_star.max(v1 + v2 + v3);
        let d = ((y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2) + (y[2] - x[2]).powi(2)).sqrt();
        if d <= rx {
            s.w = s.w.max(v2);
        } else {
            s.z = s.z.max(v2);
        }
    }
    Ok(Some(s))
}

/// Norms of one star component over the non-skipped boundary points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentNorms {
    pub linf: f64,
    pub lp: f64,
    pub weak_lp: f64,
    pub weak_l1: f64,
}

impl ComponentNorms {
    fn of(values: &[f64], weights: &[f64], p: f64) -> Self {
        ComponentNorms {
            linf: lp_norm(values, weights, f64::INFINITY),
            lp: lp_norm(values, weights, p),
            weak_lp: weak_lp_quasinorm(values, weights, p),
            weak_l1: weak_lp_quasinorm(values, weights, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalReport {
    pub description: String,
    pub p: f64,
    pub v1_star: Vec<f64>,
    pub v2_star: Vec<f64>,
    pub v3_star: Vec<f64>,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    pub u_star: Vec<f64>,
    /// Points outside the evaluation region: the lid and lateral points beyond `max_radius`.
    pub excluded: Vec<bool>,
    /// Evaluated points whose cone had no admissible interior sample.
    pub skipped: Vec<bool>,
    pub f_l1: f64,
    pub f_lp: f64,
    pub f_linf: f64,
    pub v1_norms: ComponentNorms,
    pub v2_norms: ComponentNorms,
    pub v3_norms: ComponentNorms,
    /// max over points of z(x) |x|^{n-1} / ‖f‖_1.
    pub z_constant: f64,
}

impl MaximalReport {
    pub fn skipped_count(&self) -> usize {
        self.skipped.iter().filter(|s| **s).count()
    }
}

/// Maximal surrogates at the lateral boundary points with |x| ≤ max_radius,
/// with norms of each component over those points.
///
/// The lid closes the truncated cone artificially; its rim is an edge that the
/// domain does not have, so the lid and its neighbourhood are data support only.
pub fn maximal_report(
    bnd: &ConeBoundary,
    f: &BoundaryData,
    cone: &NontangentialCone,
    model: &KernelBoundModel,
    p: f64,
    components: Components,
    max_radius: f64,
) -> Result<MaximalReport> {
    if !(p >= 1.0) {
        return Err(ConeError::Precondition(format!("exponent p = {p} must be at least 1")));
    }
    let field = PotentialField::new(bnd, f, model)?;
    let excluded: Vec<bool> = bnd.points.iter().map(|pt| pt.band.is_none() || pt.radius > max_radius).collect();
    let stars: Vec<Option<PointStars>> = (0..bnd.len())
        .into_par_iter()
        .map(|i| if excluded[i] { Ok(None) } else { maximal_surrogate(&field, i, cone, components) })
        .collect::<Result<_>>()?;
    let skipped: Vec<bool> = stars.iter().zip(&excluded).map(|(s, e)| s.is_none() && !e).collect();
    let get = |g: fn(&PointStars) -> f64| -> Vec<f64> { stars.iter().map(|s| s.as_ref().map_or(0.0, g)).collect() };
    let v1_star = get(|s| s.v1_star);
    let v2_star = get(|s| s.v2_star);
    let v3_star = get(|s| s.v3_star);
    let w = get(|s| s.w);
    let z = get(|s| s.z);
    let u_star = get(|s| s.u_star);
    let weights: Vec<f64> =
        bnd.points.iter().zip(&stars).map(|(pt, s)| if s.is_some() { pt.weight } else { 0.0 }).collect();
    let all_weights = bnd.weights();
    let f_l1 = lp_norm(&f.values, &all_weights, 1.0);
    let nf = bnd.n as f64;
    let z_constant = if f_l1 > 0.0 {
        z.iter().zip(&bnd.points).map(|(zv, pt)| zv * pt.radius.powf(nf - 1.0)).fold(0.0, f64::max) / f_l1
    } else {
        0.0
    };
    Ok(MaximalReport {
        description: f.description.clone(),
        p,
        v1_norms: ComponentNorms::of(&v1_star, &weights, p),
        v2_norms: ComponentNorms::of(&v2_star, &weights, p),
        v3_norms: ComponentNorms::of(&v3_star, &weights, p),
        f_l1,
        f_lp: lp_norm(&f.values, &all_weights, p),
        f_linf: lp_norm(&f.values, &all_weights, f64::INFINITY),
        v1_star,
        v2_star,
        v3_star,
        w,
        z,
        u_star,
        excluded,
        skipped,
        z_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn complement_is_orthonormal() {
        let n = [0.6, 0.0, 0.8];
        let (a, b) = orthonormal_complement(&n);
        let dot = |u: &[f64; 3], v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        assert!(dot(&a, &n).abs() < 1e-15 && dot(&b, &n).abs() < 1e-15 && dot(&a, &b).abs() < 1e-15);
        assert!((norm3(&a) - 1.0).abs() < 1e-15 && (norm3(&b) - 1.0).abs() < 1e-15);
    }
}
