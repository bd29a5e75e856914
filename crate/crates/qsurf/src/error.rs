//! Crate-wide error type.
//!
//! Numerical routines return `Result` only for conditions a caller can act
//! on (bad parameters, empty domains, blow-ups). Plain evaluation at a
//! valid point never fails; mixing vectors from incompatible ambient spaces
//! is a programming error and panics instead.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violates its documented constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A point was requested outside the usable domain.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Profile integration collapsed before covering a neighborhood of s = 0.
    #[error("profile blow-up: {0}")]
    ProfileBlowUp(String),

    /// An operation needs constant principal curvatures on the base.
    #[error("base hypersurface is not isoparametric")]
    NotIsoparametric,

    /// The induced metric was singular or too badly conditioned to invert.
    #[error("ill-conditioned metric: {0}")]
    IllConditioned(String),

    /// Intersecting the requested ranges left nothing to work with.
    #[error("empty regular domain: {0}")]
    EmptyDomain(String),

    /// A config file was structurally valid JSON but semantically wrong.
    #[error("config error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
