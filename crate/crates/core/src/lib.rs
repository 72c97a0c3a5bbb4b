//! Spectral exponents of the Lamé/Stokes operator pencil on conical points,
//! eigenvalue-free strip certification, and an empirical harness for the
//! kernel-bound and maximal-function estimates behind L^p Dirichlet solvability.
//!
//! The cross-section of the cone is an axisymmetric spherical cap, so every
//! eigenproblem on the sphere reduces to ordinary differential equations in
//! colatitude, one per azimuthal mode.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod green_model;
pub mod harness;
pub mod linalg;
pub mod pencil;
pub mod quadrature;
pub mod sphere_spectra;

pub use error::{ConeError, Result};
pub use green_model::{KernelBoundModel, MiddleZoneBound, Zone};
pub use pencil::{MaterialParams, PencilAssembly, PhiContext, ScanReport, StripReport};
pub use sphere_spectra::{CapDomain, DiscretizationConfig, EigenResult, Scheme, ThetaResult};
