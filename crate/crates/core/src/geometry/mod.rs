//! The body itself: the Maxwell curve, the height function, meshes and
//! file output.

pub mod body;
pub mod conjugate;
pub mod export;
pub mod mesh;

pub use body::BodyEvaluator;
pub use conjugate::{biconjugate, conjugate_profile, conjugate_slope, conjugate_value, extended_v, MaxwellCurve};
pub use export::{export_obj, export_profile_csv, export_sidecar, read_obj_counts, BodySummary};
pub use mesh::{build_mesh, BodyMesh};
