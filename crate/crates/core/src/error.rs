use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Every variant maps to a module-qualified code via [`GfcError::code`], which
/// the command-line front end prints next to the message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GfcError {
    #[error("gamma function has a pole at {0}")]
    Pole(f64),
    #[error("series did not converge within {terms} terms (last term {last_term:e})")]
    NotConverged { terms: usize, last_term: f64 },
    #[error("series cancels: largest term {peak:e} against a sum of {sum:e}")]
    Cancellation { peak: f64, sum: f64 },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel {0} is distributional and cannot be materialized as a function")]
    DistributionalKernel(String),
    #[error("no known associated Sonine kernel for {0}")]
    NoKnownAssociate(String),

    #[error("symmetric eigenproblem for the Jacobi matrix did not converge (order {0})")]
    EigenFailure(usize),
    #[error("quadrature not converged: doubling the order changed values by {delta:e} (tolerance {tol:e})")]
    QuadratureNotConverged { delta: f64, tol: f64 },
    #[error("functions live on different domains [0, {0}] and [0, {1}]")]
    DomainMismatch(f64, f64),
    #[error("point x = {x} lies outside (0, {x_max}]")]
    OutOfDomain { x: f64, x_max: f64 },
    #[error("Caputo derivative requires a function continuous at the origin")]
    CaputoRequiresContinuity,
    #[error("spectral derivative unstable: degrees disagree by {delta:e} (tolerance {tol:e})")]
    DifferentiationUnstable { delta: f64, tol: f64 },
    #[error("derivative leaves C_{{-1}}: non-integrable singularity x^{exponent} at the origin")]
    NonIntegrable { exponent: f64 },

    #[error("convolution series diverged or exceeded the budget of {terms} terms")]
    SeriesDiverged { terms: usize },
    #[error("radius witness violated at coefficient {index}: |a_j| = {value:e} > bound {bound:e}")]
    InvalidRadiusWitness { index: usize, value: f64, bound: f64 },
    #[error("no closed-form oracle for kernel {0}")]
    NoOracle(String),

    #[error("limit at the origin does not exist or is unstable (coefficient {index}, residual {residual:e})")]
    ExtrapolationUnstable { index: usize, residual: f64 },
    #[error("theorem preconditions cannot be established: {0}")]
    AdmissibilityWarning(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("value out of range in `{token}`: {msg}")]
    Range { token: String, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl GfcError {
    /// Module-qualified error code, e.g. `specfun::Pole`.
    pub fn code(&self) -> &'static str {
        use GfcError::*;
        match self {
            Pole(_) => "specfun::Pole",
            NotConverged { .. } => "specfun::NotConverged",
            Cancellation { .. } => "specfun::Cancellation",
            ArityMismatch { .. } => "specfun::ArityMismatch",
            InvalidParameter(_) => "specfun::InvalidParameter",
            DistributionalKernel(_) => "kernels::DistributionalKernel",
            NoKnownAssociate(_) => "kernels::NoKnownAssociate",
            EigenFailure(_) => "convops::EigenFailure",
            QuadratureNotConverged { .. } => "convops::QuadratureNotConverged",
            DomainMismatch(..) => "convops::DomainMismatch",
            OutOfDomain { .. } => "convops::OutOfDomain",
            CaputoRequiresContinuity => "convops::CaputoRequiresContinuity",
            DifferentiationUnstable { .. } => "convops::DifferentiationUnstable",
            NonIntegrable { .. } => "convops::NonIntegrable",
            SeriesDiverged { .. } => "series::SeriesDiverged",
            InvalidRadiusWitness { .. } => "series::InvalidRadiusWitness",
            NoOracle(_) => "series::NoOracle",
            ExtrapolationUnstable { .. } => "taylor::ExtrapolationUnstable",
            AdmissibilityWarning(_) => "theorems::AdmissibilityWarning",
            Parse { .. } => "cli::ParseError",
            Range { .. } => "cli::RangeError",
            Io(_) => "cli::Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, GfcError>;
