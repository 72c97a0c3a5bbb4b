//! The operator pencil of the Lamé/Stokes system on a cone: the cubic phi and
//! its root t(M), the eigenvalue-free strip, a Galerkin realization of the
//! pencil per azimuthal mode, and a singular-value scan certifying the strip.

pub mod assembly;
pub mod phi;
pub mod pressure;
pub mod scan;
pub mod singular;

pub use assembly::{assemble_pencil, assemble_pencil_form, DofLayout, PencilAssembly, PencilForm, PencilOperator};
pub use phi::{phi_eval, phi_excess, strip_report, t_of_m, t_of_m_with, MaterialParams, PhiContext, StripReport};
pub use pressure::{pressure_from_ur, SampledProfile};
pub use scan::{strip_scan, strip_scan_with, ControlPoint, LambdaPoint, ScanOptions, ScanReport};
pub use singular::{min_singular_value, singular_extremes, SingularExtremes};
