//! Empirical harness for the zone potentials and their nontangential maximal
//! functions on a three-dimensional truncated cone.
//!
//! The harness integrates the kernel bounds of [`crate::green_model`] against
//! scalar boundary data |f|, never an actual Green's function.

pub mod data;
pub mod lemmas;
pub mod maximal;
pub mod mesh;
pub mod norms;
pub mod potentials;

pub use data::{random_suite, BoundaryData, DataGenerator};
pub use lemmas::{
    band_memberships, critical_exponent, dyadic_band_accounting, near_zone_singular_datum, verify_lemma, Branch,
    HarnessConfig, LemmaId, LemmaVerdict, Metric, Outcome, OverlapReport, RatioSeries,
};
pub use maximal::{maximal_report, maximal_surrogate, Components, MaximalReport, NontangentialCone, PointStars};
pub use mesh::{ConeBoundary, MeshPoint, MeshSchedule, MeshSpec};
pub use norms::{lp_norm, weak_lp_quasinorm};
pub use potentials::{potential_terms, potential_terms_refined, PotentialField, PotentialTerms};
