use thiserror::Error;

/// Errors surfaced by the construction and validation operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the admissible domain (non-positive-integer
    /// denominator parameter, Γ-ratio pole, unknown identifier, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series did not converge within the configured term cap.
    #[error("series did not converge: {0}")]
    NonConvergence(String),

    /// The Wronskian (or key function) of a transformation has a node on the
    /// working grid, so the partner potential would be singular.
    #[error("singular transformation: {0}")]
    SingularTransformation(String),

    /// Node counting could not separate two candidate nodes at the requested
    /// resolution.
    #[error("node resolution: {0}")]
    Resolution(String),

    /// A quadrature overflowed or an integrand is non-integrable.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// The finite-difference oracle failed its Richardson convergence gate.
    #[error("spectral oracle did not converge: {0}")]
    Convergence(String),

    /// A coherent-state cutoff could not be grown to the requested tail mass.
    #[error("cutoff growth failure: {0}")]
    CutoffGrowth(String),

    /// A ladder coefficient radicand went negative.
    #[error("negative radicand: {0}")]
    NegativeRadicand(String),

    /// Configuration error (CLI / file ingestion).
    #[error("config error: {0}")]
    Config(String),
}
