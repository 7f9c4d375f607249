use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("radius must be non-zero")]
    ZeroRadius,
    #[error("radii {r1} and {r2} cancel: effective radius is infinite")]
    DegeneratePair { r1: f64, r2: f64 },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("electrodes touch or intersect: {0}")]
    Geometry(String),
    #[error("equipotential circles overlap (discriminant {discriminant:e})")]
    Overlap { discriminant: f64 },
    #[error("potential is singular at a line-charge location")]
    SingularPoint,
    #[error("quadrature did not reach tolerance: estimate {estimate:e}, error {error:e} after {subdivisions} subdivisions")]
    QuadratureFailure { estimate: f64, error: f64, subdivisions: usize },
    #[error("tangency limit not found: {0}")]
    TangencyNotFound(String),
    #[error("ray misses the raceway at theta={theta}, phi={phi}")]
    RayMissesRaceway { theta: f64, phi: f64 },
    #[error("linear solver stopped at relative residual {residual:e} after {iterations} iterations")]
    SolverDivergence { residual: f64, iterations: usize },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("series branch contains a zero capacitance")]
    ZeroCapacitance,
}
