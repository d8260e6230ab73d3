use thiserror::Error;

/// Which hypothesis of Matsunaga's theorem a query violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatsunagaHypothesis {
    OddPrime,
    NAtLeastTwo,
    KNonNegative,
    KAtMostPTimesPMinusOne,
    NGreaterThanK,
    NPlusKDivisibleByP,
}

impl std::fmt::Display for MatsunagaHypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MatsunagaHypothesis::OddPrime => "p must be an odd prime",
            MatsunagaHypothesis::NAtLeastTwo => "n >= 2",
            MatsunagaHypothesis::KNonNegative => "k >= 0",
            MatsunagaHypothesis::KAtMostPTimesPMinusOne => "k <= p(p-1)",
            MatsunagaHypothesis::NGreaterThanK => "n > k",
            MatsunagaHypothesis::NPlusKDivisibleByP => "n + k = 0 (mod p)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("outside the validity window: {0}")]
    OutOfWindow(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(MatsunagaHypothesis),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(i64, i64),

    #[error("malformed comodule: {0}")]
    MalformedComodule(String),

    /// A closed form and its brute-force oracle disagreed. Always a bug.
    #[error("internal contradiction: {0}")]
    Contradiction(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn window(msg: impl Into<String>) -> Self {
        Error::OutOfWindow(msg.into())
    }

    pub(crate) fn contradiction(msg: impl Into<String>) -> Self {
        Error::Contradiction(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
