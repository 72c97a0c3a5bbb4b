//! Extreme singular values of the pencil matrix measured in the energy norm of
//! the trial space: with Gram matrix K, the singular values of K^{-1/2} A K^{-1/2}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::linalg::{lanczos_largest, BandLu, BandMatrix};
use crate::pencil::assembly::PencilAssembly;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularExtremes {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// sigma_min / sigma_max.
    pub relative: f64,
}

const LANCZOS_TOL: f64 = 1e-6;
/// The largest singular value only normalizes; its Ritz value converges
/// quadratically in this residual tolerance.
const LANCZOS_TOL_TOP: f64 = 1e-5;
const LANCZOS_MAX_ITER: usize = 400;

/// Singular extremes given a factored Gram matrix (reused across λ).
pub fn singular_extremes_with(matrix: &BandMatrix, gram: &BandMatrix, gram_lu: &BandLu) -> Result<SingularExtremes> {
    if !matrix.is_finite() {
        return Err(ConeError::Numerical("pencil matrix has non-finite entries".into()));
    }
    let dim = matrix.dim();
    let adjoint = matrix.conj_transpose();
    let lu = matrix.lu()?;
    let lu_adj = adjoint.lu()?;
    // A^{-1} K A^{-*} K has largest eigenvalue 1 / sigma_min^2
    let inv_top = lanczos_largest(
        dim,
        |x| lu.solve(&gram.mul_vec(&lu_adj.solve(&gram.mul_vec(x)))),
        |x: &[Complex64]| gram.mul_vec(x),
        LANCZOS_TOL,
        LANCZOS_MAX_ITER,
    )?;
    // K^{-1} A* K^{-1} A has largest eigenvalue sigma_max^2
    let top = lanczos_largest(
        dim,
        |x| gram_lu.solve(&adjoint.mul_vec(&gram_lu.solve(&matrix.mul_vec(x)))),
        |x: &[Complex64]| gram.mul_vec(x),
        LANCZOS_TOL_TOP,
        LANCZOS_MAX_ITER,
    )?;
    if !(inv_top > 0.0 && top > 0.0) {
        return Err(ConeError::Numerical(format!("non-positive Lanczos estimates ({inv_top:.3e}, {top:.3e})")));
    }
    let sigma_min = inv_top.sqrt().recip();
    let sigma_max = top.sqrt();
    Ok(SingularExtremes { sigma_min, sigma_max, relative: sigma_min / sigma_max })
}

pub fn singular_extremes(asm: &PencilAssembly) -> Result<SingularExtremes> {
    let gram_lu = asm.gram.lu()?;
    singular_extremes_with(&asm.matrix, &asm.gram, &gram_lu)
}

/// Smallest singular value relative to the largest, in the energy norm.
pub fn min_singular_value(asm: &PencilAssembly) -> Result<f64> {
    Ok(singular_extremes(asm)?.relative)
}
