use thiserror::Error;

/// Errors shared across the exact and numeric layers.
///
/// Resource caps surface as `ResourceLimit` so that oversized inputs fail
/// loudly instead of hanging; cross-prime disagreement is always a hard error
/// because every certificate is required to agree on two primes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("resource limit exceeded in {what}: {detail}")]
    ResourceLimit { what: &'static str, detail: String },

    #[error("results disagree between primes {p1} and {p2} in {what}: {v1} vs {v2}")]
    PrimeDisagreement {
        what: &'static str,
        p1: u64,
        p2: u64,
        v1: String,
        v2: String,
    },

    #[error("modulus {0} is not usable here: {1}")]
    BadModulus(u64, String),

    #[error("invalid representation data: {0}")]
    InvalidSpec(String),

    #[error("value expected to be real has imaginary part {imag:.3e}")]
    NotReal { imag: f64 },

    #[error("exact integer arithmetic overflowed in {0}; input magnitudes too large")]
    IntOverflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
