//! Scalar boundary data and their reproducible generators.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mesh::ConeBoundary;
use super::norms::lp_norm;
use crate::error::{ConeError, Result};

/// Generator of a boundary datum f.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataGenerator {
    Zero,
    Constant {
        value: f64,
    },
    /// Smooth oscillating datum in (azimuth, radius) drawn from the ChaCha stream (seed, index).
    Random {
        seed: u64,
        index: u64,
    },
    /// Constant on the lateral band lo ≤ |ξ| < hi, normalised to unit L^1 mass.
    BandLocalized {
        lo: f64,
        hi: f64,
    },
    /// |ξ|^{-exponent} on the lateral surface, 1 on the lid.
    VertexSingular {
        exponent: f64,
    },
}

const RANDOM_TERMS: usize = 6;

impl DataGenerator {
    /// The datum |ξ|^{-(n-1)(1-eps)/p}, which lies in L^p and barely fails to lie in L^q for q slightly above p.
    pub fn vertex_singular(n: usize, p: f64, eps: f64) -> Self {
        DataGenerator::VertexSingular { exponent: (n as f64 - 1.0) * (1.0 - eps) / p }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, DataGenerator::VertexSingular { exponent } if *exponent > 0.0)
    }

    pub fn tag(&self) -> String {
        match self {
            DataGenerator::Zero => "zero".into(),
            DataGenerator::Constant { value } => format!("constant({value})"),
            DataGenerator::Random { seed, index } => format!("random(seed={seed},index={index})"),
            DataGenerator::BandLocalized { lo, hi } => format!("band-localized([{lo},{hi}))"),
            DataGenerator::VertexSingular { exponent } => format!("vertex-singular(exponent={exponent})"),
        }
    }

    pub fn sample(&self, bnd: &ConeBoundary) -> Result<BoundaryData> {
        let values: Vec<f64> = match *self {
            DataGenerator::Zero => vec![0.0; bnd.len()],
            DataGenerator::Constant { value } => vec![value; bnd.len()],
            DataGenerator::Random { seed, index } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index);
                let terms: Vec<[f64; 4]> = (0..RANDOM_TERMS)
                    .map(|_| {
                        [
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(0..5) as f64,
                            rng.gen_range(0.0..2.0 * PI),
                            rng.gen_range(0.0..2.0 * PI),
                        ]
                    })
                    .collect();
                bnd.points
                    .iter()
                    .map(|pt| {
                        let phi = pt.position[1].atan2(pt.position[0]);
                        // s runs over [0, 1] along the lateral surface and over [1, 2] on the lid
                        let s = match pt.band {
                            Some(_) => pt.radius / bnd.delta,
                            None => {
                                let rho = (pt.position[0].powi(2) + pt.position[1].powi(2)).sqrt();
                                2.0 - rho.atan2(pt.position[2]) / bnd.theta0
                            }
                        };
                        1.0 + 0.5 * terms.iter().map(|[a, m, om, ph]| a * (m * phi + om * s + ph).cos()).sum::<f64>()
                    })
                    .collect()
            }
            DataGenerator::BandLocalized { lo, hi } => {
                if !(lo >= 0.0 && hi > lo) {
                    return Err(ConeError::Precondition(format!("empty band [{lo}, {hi})")));
                }
                let inside = |i: usize| {
                    let p = &bnd.points[i];
                    p.band.is_some() && p.radius >= lo && p.radius < hi
                };
                let mass: f64 = (0..bnd.len()).filter(|&i| inside(i)).map(|i| bnd.points[i].weight).sum();
                if mass == 0.0 {
                    return Err(ConeError::Precondition(format!("band [{lo}, {hi}) contains no mesh points")));
                }
                (0..bnd.len()).map(|i| if inside(i) { 1.0 / mass } else { 0.0 }).collect()
            }
            DataGenerator::VertexSingular { exponent } => bnd
                .points
                .iter()
                .map(|pt| if pt.band.is_some() { (pt.radius / bnd.delta).powf(-exponent) } else { 1.0 })
                .collect(),
        };
        BoundaryData::new(bnd, values, self.tag())
    }
}

/// Seeded random data with indices 0..count.
pub fn random_suite(seed: u64, count: usize) -> Vec<DataGenerator> {
    (0..count as u64).map(|index| DataGenerator::Random { seed, index }).collect()
}

/// A scalar datum sampled on a boundary mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub values: Vec<f64>,
    pub description: String,
}

impl BoundaryData {
    pub fn new(bnd: &ConeBoundary, values: Vec<f64>, description: String) -> Result<Self> {
        if values.len() != bnd.len() {
            return Err(ConeError::Precondition(format!(
                "datum has {} values for a mesh of {} points",
                values.len(),
                bnd.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ConeError::Precondition(format!("datum {description} has non-finite values")));
        }
        Ok(BoundaryData { values, description })
    }

    pub fn lp_norm(&self, bnd: &ConeBoundary, p: f64) -> f64 {
        lp_norm(&self.values, &bnd.weights(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::mesh::MeshSpec;

    fn mesh() -> ConeBoundary {
        ConeBoundary::new(PI / 2.0, 1.0, MeshSpec { bands: 8, radial: 3, angular: 16, lid_rings: 4 }).unwrap()
    }

    #[test]
    fn random_is_reproducible_and_distinct() {
        let b = mesh();
        let a = DataGenerator::Random { seed: 7, index: 1 }.sample(&b).unwrap();
        let a2 = DataGenerator::Random { seed: 7, index: 1 }.sample(&b).unwrap();
        let c = DataGenerator::Random { seed: 7, index: 2 }.sample(&b).unwrap();
        assert_eq!(a, a2);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn band_localized_has_unit_mass() {
        let b = mesh();
        let f = DataGenerator::BandLocalized { lo: 0.5, hi: 1.0 }.sample(&b).unwrap();
        assert!((f.lp_norm(&b, 1.0) - 1.0).abs() < 1e-13);
    }
}
