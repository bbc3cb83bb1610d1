use thiserror::Error;

/// Errors raised by the series engines, the exact backend and the trackers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("leading coefficient c1 of the base function is zero")]
    ZeroLeadingCoefficient,

    #[error("multi-index or multiset must have total order at least 1")]
    EmptyIndex,

    #[error("operands use different symbol tables")]
    SymbolTableMismatch,

    #[error("symbol `{0}` is not bound")]
    UnboundSymbol(String),

    #[error("symbol `{0}` appears with a negative exponent but is bound to zero")]
    ZeroNegativeExponent(String),

    #[error("symbol `{0}` may not carry a negative exponent")]
    NegativeExponent(String),

    #[error("order {requested} exceeds the symbolic order {available} of this engine")]
    OrderTooLarge { requested: usize, available: usize },

    #[error("multiset of size {0} exceeds the partition enumeration cap of {cap}", cap = crate::series::MAX_PARTITION_SIZE)]
    PartitionCap(usize),

    #[error("the supplied point is not a zero of the base function (relative residual {0:e})")]
    NotAZero(f64),

    #[error("alpha exponents do not match: {0}")]
    PrefactorMismatch(String),

    #[error("branch mismatch: {0}")]
    BranchMismatch(String),

    #[error(
        "newton iteration did not converge after {iterations} iterations (|f| = {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("derivative {0:e} is below the singularity threshold")]
    SingularDerivative(f64),

    #[error("|a| = {norm:e} lies outside the tracking radius {radius:e}")]
    OutsideRadius { norm: f64, radius: f64 },

    #[error("precision of {0} bits requires the `mpfr` feature")]
    PrecisionUnavailable(u32),
}

impl Error {
    /// True for failures of the numeric trackers (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::SingularDerivative(_)
                | Error::OutsideRadius { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
