//! Plate-capacitor models: `C = int eps / h dA` over a gap profile.
//!
//! Model A uses effective radii, models B to D the true circle sections in
//! one plane, and the 3D variants integrate over the ball surface with gaps
//! found by ray casting against the raceway torus.

mod models2d;
mod models3d;
mod profile;
pub mod raytrace;

pub use models2d::{
    cap2d_model_a, cap2d_model_b, cap2d_model_c, cap2d_model_d, model_a_closed_form, ray_gap,
    section_limits, SectionLimits,
};
pub use models3d::{cap3d_model_a, cap3d_model_e, IntegrationRect};
pub use profile::{GapProfile, HeightModel, ProfileKind};
