use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bad bracket [{lo}, {hi}]: lo must be < hi and both ends finite")]
    BadBracket { lo: f64, hi: f64 },
    #[error("no sign change over [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("root finder did not converge after {iterations} iterations (x = {x}, f(x) = {residual})")]
    NoConvergence { iterations: usize, x: f64, residual: f64 },
    #[error("non-finite function value at x = {x}")]
    NonFinite { x: f64 },
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("bad frequency {0}: must be > 0")]
    BadFrequency(f64),
    #[error("invalid material parameter `{name}` = {value}: {constraint}")]
    BadMaterial { name: &'static str, value: f64, constraint: &'static str },
    #[error("degenerate denominator eps2^2 - eps1^2 at omega = {omega}")]
    DegenerateDenominator { omega: f64 },
    #[error("mode unconfined at omega = {omega} (Re k_perp = {re_k_perp})")]
    Unconfined { omega: f64, re_k_perp: f64 },
    #[error("bad dispersion at omega = {omega}: {reason}")]
    BadDispersion { omega: f64, reason: String },
    #[error("geometry factor argument must be >= 0, got {0}")]
    NegativeArgument(f64),
    #[error("invalid atomic parameter `{name}` = {value}: must be > 0")]
    BadAtomicParams { name: &'static str, value: f64 },
    #[error("invalid normalization parameter `{name}` = {value}: must be > 0")]
    BadNormalization { name: &'static str, value: f64 },
    #[error("bad geometry: L = {length}, v_g = {v_g} (both must be > 0)")]
    BadGeometry { length: f64, v_g: f64 },
    #[error(
        "truncation too severe: tail mass {tail_mass:e} exceeds {tail_tol:e} at dim {dim}; need dim >= {required_dim}"
    )]
    TruncationTooSevere { dim: usize, tail_mass: f64, tail_tol: f64, required_dim: usize },
    #[error("state not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("homodyne density {density:e} at x = {x} too small to condition on")]
    ZeroDensity { x: f64, density: f64 },
    #[error("bad sampling configuration: {0}")]
    BadSeedConfig(String),
    #[error("invalid dimension: {0}")]
    BadDimension(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadBracket { .. } => "BadBracket",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NonFinite { .. } => "NonFinite",
            Error::BadGrid(_) => "BadGrid",
            Error::BadFrequency(_) => "BadFrequency",
            Error::BadMaterial { .. } => "BadMaterial",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::Unconfined { .. } => "Unconfined",
            Error::BadDispersion { .. } => "BadDispersion",
            Error::NegativeArgument(_) => "NegativeArgument",
            Error::BadAtomicParams { .. } => "BadAtomicParams",
            Error::BadNormalization { .. } => "BadNormalization",
            Error::BadGeometry { .. } => "BadGeometry",
            Error::TruncationTooSevere { .. } => "TruncationTooSevere",
            Error::NotNormalized(_) => "NotNormalized",
            Error::ZeroDensity { .. } => "ZeroDensity",
            Error::BadSeedConfig(_) => "BadSeedConfig",
            Error::BadDimension(_) => "BadDimension",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
