//! Boundary mesh of the truncated cone {r < δ, θ < θ0} in three dimensions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::quadrature::GaussLegendre;

/// Resolution of a boundary mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshSpec {
    /// Number of dyadic lateral bands [2^{-k-1}δ, 2^{-k}δ], k = 0..bands.
    pub bands: usize,
    /// Gauss nodes in radius per band.
    pub radial: usize,
    /// Uniform azimuthal samples.
    pub angular: usize,
    /// Gauss nodes in colatitude on the lid.
    pub lid_rings: usize,
}

impl MeshSpec {
    pub fn validate(&self) -> Result<()> {
        if self.bands == 0 || self.radial == 0 || self.angular < 3 || self.lid_rings == 0 {
            return Err(ConeError::Precondition(format!("degenerate mesh specification {self:?}")));
        }
        Ok(())
    }
}

/// Refinement schedule: level l uses base + l * step componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshSchedule {
    pub base: MeshSpec,
    pub step: MeshSpec,
}

impl MeshSchedule {
    pub fn at(&self, level: usize) -> MeshSpec {
        MeshSpec {
            bands: self.base.bands + level * self.step.bands,
            radial: self.base.radial + level * self.step.radial,
            angular: self.base.angular + level * self.step.angular,
            lid_rings: self.base.lid_rings + level * self.step.lid_rings,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshPoint {
    pub position: [f64; 3],
    pub radius: f64,
    pub weight: f64,
    /// Unit normal pointing into the domain.
    pub normal: [f64; 3],
    /// Local mesh spacing.
    pub spacing: f64,
    /// Dyadic band index for lateral points, `None` on the lid.
    pub band: Option<usize>,
    /// Radial quadrature cell [lo, hi) of the point; degenerate [δ, δ] on the lid.
    pub radial_cell: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeBoundary {
    pub n: usize,
    pub theta0: f64,
    pub delta: f64,
    pub spec: MeshSpec,
    /// Points sorted by nondecreasing radius.
    pub points: Vec<MeshPoint>,
}

impl ConeBoundary {
    pub fn new(theta0: f64, delta: f64, spec: MeshSpec) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < PI) {
            return Err(ConeError::Domain(format!("cap angle {theta0} must lie in (0, pi)")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(ConeError::Domain(format!("radius delta = {delta} must be positive")));
        }
        spec.validate()?;
        let (st, ct) = theta0.sin_cos();
        let q = spec.angular;
        let dphi = 2.0 * PI / q as f64;
        let azimuths: Vec<(f64, f64)> = (0..q).map(|j| ((j as f64 + 0.5) * dphi).sin_cos()).collect();
        let ref_rule = GaussLegendre::new(spec.radial);
        let reference: Vec<(f64, f64)> = ref_rule.on_interval(0.5, 1.0).collect();

        let mut points = Vec::with_capacity(spec.bands * spec.radial * q + spec.lid_rings * q);
        for k in (0..spec.bands).rev() {
            let scale = delta * 0.5f64.powi(k as i32);
            let spacing_r = 0.5 * scale / spec.radial as f64;
            let mut cell_lo = 0.5 * scale;
            for &(u, wu) in &reference {
                let r = scale * u;
                let wr = scale * wu;
                let cell = (cell_lo, cell_lo + wr);
                cell_lo += wr;
                for &(sp, cp) in &azimuths {
                    let dir = [st * cp, st * sp, ct];
                    points.push(MeshPoint {
                        position: [r * dir[0], r * dir[1], r * dir[2]],
                        radius: r,
                        weight: wr * r * st * dphi,
                        normal: [-ct * cp, -ct * sp, st],
                        spacing: spacing_r.max(r * st * dphi),
                        band: Some(k),
                        radial_cell: cell,
                    });
                }
            }
        }
        let lid_rule = GaussLegendre::new(spec.lid_rings);
        let lid_spacing = delta * (theta0 / spec.lid_rings as f64).max(theta0.min(PI / 2.0).sin() * dphi);
        for (th, wth) in lid_rule.on_interval(0.0, theta0) {
            let (s, c) = th.sin_cos();
            for &(sp, cp) in &azimuths {
                let dir = [s * cp, s * sp, c];
                points.push(MeshPoint {
                    position: [delta * dir[0], delta * dir[1], delta * dir[2]],
                    radius: delta,
                    weight: delta * delta * s * wth * dphi,
                    normal: [-dir[0], -dir[1], -dir[2]],
                    spacing: lid_spacing,
                    band: None,
                    radial_cell: (delta, delta),
                });
            }
        }
        debug_assert!(points.windows(2).all(|w| w[0].radius <= w[1].radius));
        Ok(ConeBoundary { n: 3, theta0, delta, spec, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.radius).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.weight).collect()
    }

    pub fn lateral_measure(&self) -> f64 {
        self.points.iter().filter(|p| p.band.is_some()).map(|p| p.weight).sum()
    }

    pub fn lid_measure(&self) -> f64 {
        self.points.iter().filter(|p| p.band.is_none()).map(|p| p.weight).sum()
    }

    /// Area of the lateral surface {θ = θ0, 0 < r < δ}.
    pub fn analytic_lateral_area(&self) -> f64 {
        PI * self.theta0.sin() * self.delta * self.delta
    }

    /// Area of the lid {r = δ, θ < θ0}.
    pub fn analytic_lid_area(&self) -> f64 {
        2.0 * PI * self.delta * self.delta * (1.0 - self.theta0.cos())
    }

    /// Indices of the lateral points of dyadic band k.
    pub fn band_indices(&self, k: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.points[i].band == Some(k)).collect()
    }

    pub fn contains(&self, y: &[f64; 3]) -> bool {
        let r = norm3(y);
        r > 0.0 && r < self.delta && colatitude(y) < self.theta0
    }

    /// Distance surrogate R(y) to the boundary: the lateral cone distance capped by the lid distance.
    pub fn boundary_distance(&self, y: &[f64; 3]) -> f64 {
        let r = norm3(y);
        let gap = (self.theta0 - colatitude(y)).min(PI / 2.0);
        (r * gap.sin()).min(self.delta - r)
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub(crate) fn colatitude(v: &[f64; 3]) -> f64 {
    let rho = (v[0] * v[0] + v[1] * v[1]).sqrt();
    rho.atan2(v[2])
}
