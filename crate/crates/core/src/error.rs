use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An enumeration or table was asked to exceed its hard size limit.
    #[error("{what}: {value} exceeds the limit {limit}")]
    Guard {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// An argument lies outside the mathematical domain of the operation.
    #[error("{what}: argument {value} out of domain")]
    Domain { what: &'static str, value: f64 },

    /// A signed inclusion-exclusion sum came out negative. Only an
    /// indexing bug can cause this.
    #[error("{what}({n}, {k}): signed sum is negative")]
    NegativeSum {
        what: &'static str,
        n: usize,
        k: usize,
    },

    /// The root bracket for the direction function could not be found.
    #[error("could not bracket f^-1({0}) within 200 doublings")]
    Bracket(f64),

    /// A quantity that must be strictly positive at the saddle point is not.
    #[error("{what} is not positive at the saddle point ({value})")]
    Degenerate { what: &'static str, value: f64 },

    /// The truncated LCLT window ended on a term that is not negligible.
    #[error("window for n = {n} ends at {last:e}, not below 1e-8 of the sup {sup:e}")]
    Truncation { n: usize, last: f64, sup: f64 },

    #[error("logarithm of zero count")]
    LogOfZero,

    #[error("invalid count literal {0:?}")]
    Parse(String),
}

impl Error {
    /// True for the size-limit errors the CLI maps to its own exit code.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }

    pub(crate) fn guard(
        what: &'static str,
        value: impl TryInto<u64>,
        limit: impl TryInto<u64>,
    ) -> Self {
        Error::Guard {
            what,
            value: value.try_into().unwrap_or(u64::MAX),
            limit: limit.try_into().unwrap_or(u64::MAX),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
