use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{degree} is out of range")]
    FieldTooLarge { p: u64, degree: usize },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(usize),
    #[error("element {0} is not in the field")]
    InvalidElement(u64),
    #[error("zero inverse")]
    ZeroInverse,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("singular Moore matrix")]
    SingularMoore,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("too large for exact distance: {0} codewords")]
    TooLargeForDistance(u128),
    #[error("undecodable: observed rows have rank {rank}, need {needed}")]
    Undecodable { rank: usize, needed: usize },
    #[error("inconsistent shares")]
    InconsistentShares,
    #[error("no local relation for coordinate {0}")]
    NoLocalRelation(usize),
    #[error("incomplete recovery set for coordinate {0}: missing {1}")]
    IncompleteRecoverySet(usize, usize),
    #[error("not found after {0} tries")]
    NotFound(usize),
    #[error("lemma inapplicable: {0}")]
    LemmaInapplicable(String),
    #[error("too large for oracle: {0} support points exceed limit {1}")]
    TooLargeForOracle(u128, u128),
    #[error("size cutoff exceeded: {0}")]
    Cutoff(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("sampling failed after {0} retries, raise field size")]
    SamplingFailed(usize),
    #[error("format error: {0}")]
    Format(String),
}
