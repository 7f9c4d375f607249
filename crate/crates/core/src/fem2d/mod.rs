//! Finite-element model of one section (model G).
//!
//! The domain between the ball arc and the raceway arc is meshed with
//! linear triangles along rays ("fibres") from the ball centre, graded
//! towards the contact. Laplace's equation is solved with the ball at 1 V
//! and the raceway grounded; the truncating rays are insulating.

mod convergence;
mod mesh;
mod solve;

pub use convergence::{convergence_study, richardson, ConvergenceRow, ConvergenceStudy};
pub use mesh::{generate_mesh, mesh_with_limit, BoundaryEdge, BoundaryTag, Mesh2D};
pub use solve::{model_g, solve, solve_with, FemSolution, LinearSolver};
