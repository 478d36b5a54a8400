use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("degenerate base: {0}")]
    DegenerateBase(String),

    #[error("operators over different bases q")]
    MixedBase,

    #[error("parameter degeneracy: {0}")]
    ParamDegeneracy(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("singular recurrence system at n = {n}: {reason}")]
    SingularSystem { n: usize, reason: String },

    #[error("P2(theta_{0}) vanishes")]
    GammaVanishes(usize),

    #[error("D-operator spec {0} has no geometric form")]
    NoGeometricForm(String),

    #[error("unknown theorem {0:?}")]
    UnknownTheorem(String),

    #[error("moment functional is not quasi-definite: Hankel determinant Delta_{0} vanishes")]
    NotQuasiDefinite(usize),

    #[error("moment {0} is not available from this functional")]
    MomentUnavailable(usize),

    #[error("denominator vanishes at n = {0}")]
    DenominatorVanishes(usize),

    #[error("cross-check {check} failed at moment {index}")]
    CrossCheckFailed { check: String, index: usize },

    #[error("dilation by zero")]
    ZeroDilation,

    #[error("expected a polynomial, got a proper rational function")]
    NonPolynomial,

    #[error("invalid search problem: {0}")]
    InvalidProblem(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("modular reconstruction did not converge after {0} primes")]
    ReconstructionFailed(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
