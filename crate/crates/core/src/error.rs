use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: requested {requested} {what}, limit is {limit}")]
    Resource {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("pole at s = {sigma} + {t}i")]
    Pole { sigma: f64, t: f64 },

    #[error("outside the implemented region: {0}")]
    OutOfRegion(String),

    #[error("character value is zero at {0}; the term is omitted")]
    TermOmitted(u64),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("phase ambiguity along the path at s = {sigma} + {t}i (possible zero nearby)")]
    Ambiguity { sigma: f64, t: f64 },

    #[error("no sign change in [{lo}, {hi}]: F(lo) = {f_lo}, F(hi) = {f_hi}")]
    Bracketing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("divergent: {0}")]
    Divergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
