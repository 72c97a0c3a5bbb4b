//! The three zone potentials v1, v2, v3 of |f| against the kernel bounds.

use serde::{Deserialize, Serialize};

use super::data::{BoundaryData, DataGenerator};
use super::mesh::{norm3, ConeBoundary, MeshSpec};
use crate::error::{ConeError, Result};
use crate::green_model::{KernelBoundModel, MiddleZoneBound};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PotentialTerms {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl PotentialTerms {
    pub fn sum(&self) -> f64 {
        self.v1 + self.v2 + self.v3
    }
}

/// Points of equal radius sharing one radial quadrature cell.
#[derive(Debug, Clone, Copy)]
struct Ring {
    start: usize,
    end: usize,
    lo: f64,
    hi: f64,
    far: f64,
    near: f64,
}

impl Ring {
    /// Fraction of the ring's cell inside [a, b].
    fn fraction(&self, a: f64, b: f64) -> f64 {
        if self.hi == self.lo {
            return if a <= self.lo && self.lo <= b { 1.0 } else { 0.0 };
        }
        ((self.hi.min(b) - self.lo.max(a)) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
}

/// Precomputed zone sums for fast evaluation of the potentials at many interior points.
///
/// Mesh points are grouped into rings of equal radius. Each ring's mass is
/// spread over its radial quadrature cell, so a ring straddling a zone
/// boundary contributes the covered fraction and the potentials are
/// continuous in |y|.
#[derive(Debug, Clone)]
pub struct PotentialField<'a> {
    bnd: &'a ConeBoundary,
    model: KernelBoundModel,
    rings: Vec<Ring>,
    ring_hi: Vec<f64>,
    far_suffix: Vec<f64>,
    near_prefix: Vec<f64>,
    /// Position and |f| weight per point, packed for the middle-zone sum.
    packed: Vec<[f64; 4]>,
}

impl<'a> PotentialField<'a> {
    pub fn new(bnd: &'a ConeBoundary, f: &BoundaryData, model: &KernelBoundModel) -> Result<Self> {
        if model.n != bnd.n {
            return Err(ConeError::Precondition(format!(
                "kernel model dimension {} does not match boundary dimension {}",
                model.n, bnd.n
            )));
        }
        if f.values.len() != bnd.len() {
            return Err(ConeError::Precondition("datum does not match the mesh".into()));
        }
        let mass: Vec<f64> = bnd.points.iter().zip(&f.values).map(|(p, v)| p.weight * v.abs()).collect();
        let decay = model.e1_decay();
        let mut rings: Vec<Ring> = Vec::new();
        for (i, pt) in bnd.points.iter().enumerate() {
            let far = mass[i] * pt.radius.powf(-decay);
            let near = mass[i] * pt.radius.powf(model.alpha - 1.0);
            match rings.last_mut() {
                Some(r) if (r.lo, r.hi) == pt.radial_cell => {
                    r.end = i + 1;
                    r.far += far;
                    r.near += near;
                }
                _ => rings.push(Ring { start: i, end: i + 1, lo: pt.radial_cell.0, hi: pt.radial_cell.1, far, near }),
            }
        }
        let mut far_suffix = vec![0.0; rings.len() + 1];
        for j in (0..rings.len()).rev() {
            far_suffix[j] = far_suffix[j + 1] + rings[j].far;
        }
        let mut near_prefix = vec![0.0; rings.len() + 1];
        for j in 0..rings.len() {
            near_prefix[j + 1] = near_prefix[j] + rings[j].near;
        }
        let ring_hi = rings.iter().map(|r| r.hi).collect();
        let packed =
            bnd.points.iter().zip(&mass).map(|(p, m)| [p.position[0], p.position[1], p.position[2], *m]).collect();
        Ok(PotentialField { bnd, model: *model, rings, ring_hi, far_suffix, near_prefix, packed })
    }

    fn check(&self, y: &[f64; 3]) -> Result<f64> {
        if !self.bnd.contains(y) {
            return Err(ConeError::Precondition(format!("point {y:?} is not in the domain")));
        }
        Ok(norm3(y))
    }

    /// Index of the first ring whose cell extends beyond `rho`.
    fn ring_at(&self, rho: f64) -> usize {
        self.ring_hi.partition_point(|&h| h <= rho)
    }

    pub fn v1(&self, y: &[f64; 3]) -> Result<f64> {
        let r = self.check(y)?;
        let rho = 2.0 * r;
        let j = self.ring_at(rho);
        let sum = match self.rings.get(j) {
            Some(ring) => ring.far * ring.fraction(rho, f64::INFINITY) + self.far_suffix[j + 1],
            None => 0.0,
        };
        Ok(self.model.c * r.powf(self.model.alpha) * sum)
    }

    pub fn v3(&self, y: &[f64; 3]) -> Result<f64> {
        let r = self.check(y)?;
        let rho = 0.5 * r;
        let j = self.ring_at(rho);
        let partial = self.rings.get(j).map_or(0.0, |ring| ring.near * ring.fraction(0.0, rho));
        Ok(self.model.c * r.powf(-(self.model.n as f64 - 2.0 + self.model.alpha)) * (self.near_prefix[j] + partial))
    }

    pub fn v2(&self, y: &[f64; 3]) -> Result<f64> {
        let r = self.check(y)?;
        let (a, b) = (0.5 * r, 2.0 * r);
        let mut sum = 0.0;
        for ring in &self.rings[self.ring_at(a)..] {
            if ring.lo > b {
                break;
            }
            let frac = ring.fraction(a, b);
            if frac == 0.0 {
                continue;
            }
            // n = 3: |y - ξ|^{-3} for the normal-derivative form, |y - ξ|^{-2} for the raw gradient
            let window = &self.packed[ring.start..ring.end];
            let s: f64 = match self.model.middle {
                MiddleZoneBound::NormalDerivative => window
                    .iter()
                    .map(|[p, q, s, m]| {
                        let d2 = (y[0] - p) * (y[0] - p) + (y[1] - q) * (y[1] - q) + (y[2] - s) * (y[2] - s);
                        m / (d2 * d2.sqrt())
                    })
                    .sum(),
                MiddleZoneBound::RawGradient => window
                    .iter()
                    .map(|[p, q, s, m]| {
                        let d2 = (y[0] - p) * (y[0] - p) + (y[1] - q) * (y[1] - q) + (y[2] - s) * (y[2] - s);
                        m / d2
                    })
                    .sum(),
            };
            sum += frac * s;
        }
        let prefactor = match self.model.middle {
            MiddleZoneBound::NormalDerivative => self.bnd.boundary_distance(y),
            MiddleZoneBound::RawGradient => 1.0,
        };
        Ok(self.model.c * prefactor * sum)
    }

    pub fn terms(&self, y: &[f64; 3]) -> Result<PotentialTerms> {
        Ok(PotentialTerms { v1: self.v1(y)?, v2: self.v2(y)?, v3: self.v3(y)? })
    }

    pub fn boundary(&self) -> &ConeBoundary {
        self.bnd
    }
}

/// Quadrature evaluation of the three zone integrals at an interior point y.
pub fn potential_terms(
    y: &[f64; 3],
    f: &BoundaryData,
    bnd: &ConeBoundary,
    model: &KernelBoundModel,
) -> Result<PotentialTerms> {
    PotentialField::new(bnd, f, model)?.terms(y)
}

/// Evaluates the potentials on a coarse and a fine mesh and returns the fine
/// values, failing when any term changes by more than `tol` relative.
pub fn potential_terms_refined(
    y: &[f64; 3],
    f: &DataGenerator,
    theta0: f64,
    coarse: MeshSpec,
    fine: MeshSpec,
    model: &KernelBoundModel,
    tol: f64,
) -> Result<PotentialTerms> {
    let eval = |spec: MeshSpec| -> Result<PotentialTerms> {
        let bnd = ConeBoundary::new(theta0, model.delta, spec)?;
        potential_terms(y, &f.sample(&bnd)?, &bnd, model)
    };
    let a = eval(coarse)?;
    let b = eval(fine)?;
    let change = [(a.v1, b.v1), (a.v2, b.v2), (a.v3, b.v3)]
        .iter()
        .map(|(u, v)| if *v == 0.0 { u.abs() } else { (u - v).abs() / v.abs() })
        .fold(0.0, f64::max);
    if change > tol {
        return Err(ConeError::Quadrature { change });
    }
    Ok(b)
}
