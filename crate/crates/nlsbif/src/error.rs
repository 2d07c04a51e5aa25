use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("delta potentials have no pointwise evaluation")]
    DeltaNotEvaluable,
    #[error("operation requires a different potential kind")]
    WrongKind,
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("ODE integration failed (last accepted x = {x_last})")]
    IntegrationFailure { x_last: f64 },
    #[error("zero of the target on the contour after repeated inflation")]
    BoundaryZero,
    #[error("box subdivision depth exceeded")]
    DepthExceeded,
    #[error("spectral point is not on the imaginary axis")]
    NotOnAxis,
    #[error("Newton iteration failed to converge")]
    NewtonDiverged,
    #[error("degenerate seed: non-degeneracy functional vanishes")]
    Degenerate,
    #[error("boundary condition left its admissible range (kappa^2 < eps/2 * U^2)")]
    BcOutOfRange,
    #[error("logarithmic derivative outside the soliton flank range")]
    LogDerivOutOfRange,
    #[error("inner solution vanishes at the matching point")]
    ZeroBoundaryValue,
    #[error("potential has no threshold resonance")]
    NoThreshold,
    #[error("potential is not even")]
    NotSymmetric,
    #[error("energy above the delta-branch threshold -alpha^2/4")]
    AboveThreshold,
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
