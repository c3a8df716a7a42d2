use thiserror::Error;

/// Failure modes shared by every solver layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("derivative vanishes at z = {re}{im:+}i")]
    DerivativeVanishes { re: f64, im: f64 },
    #[error("value overflows the floating range; use the log-scaled evaluator")]
    Overflow,
    #[error("unsupported derivative/primitive order {0}")]
    UnsupportedOrder(i32),
    #[error("denominator too close to zero: |d| = {0:e}")]
    NearZeroDenominator(f64),
    #[error("branch ambiguous: {0}")]
    BranchAmbiguity(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("series diverging after {terms} terms")]
    SeriesDiverging { terms: usize },
    #[error("Langer map branch failure: {0}")]
    BranchFailure(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("contraction not certified: measured factor {0:.3}")]
    ContractionNotCertified(f64),
    #[error("mode construction failed: {0}")]
    ModeConstructionFailed(String),
    #[error("degenerate denominator in ratio {0}")]
    DegenerateDenominator(&'static str),
    #[error("iterate left the validity neighbourhood: c = {re}{im:+}i")]
    LeftHalfPlaneExit { re: f64, im: f64 },
    #[error("no crossing found in the scanned range")]
    CrossingNotFound,
    #[error("ill-conditioned problem: {0}")]
    IllConditioned(String),
    #[error("eigen solve failed: {0}")]
    EigenSolveFailed(String),
    #[error("usage: {0}")]
    UsageError(String),
}

impl Error {
    /// Stable variant name used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DerivativeVanishes { .. } => "DerivativeVanishes",
            Error::Overflow => "Overflow",
            Error::UnsupportedOrder(_) => "UnsupportedOrder",
            Error::NearZeroDenominator(_) => "NearZeroDenominator",
            Error::BranchAmbiguity(_) => "BranchAmbiguity",
            Error::QuadratureFailure(_) => "QuadratureFailure",
            Error::SeriesDiverging { .. } => "SeriesDiverging",
            Error::BranchFailure(_) => "BranchFailure",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::ContractionNotCertified(_) => "ContractionNotCertified",
            Error::ModeConstructionFailed(_) => "ModeConstructionFailed",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
            Error::LeftHalfPlaneExit { .. } => "LeftHalfPlaneExit",
            Error::CrossingNotFound => "CrossingNotFound",
            Error::IllConditioned(_) => "IllConditioned",
            Error::EigenSolveFailed(_) => "EigenSolveFailed",
            Error::UsageError(_) => "UsageError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
