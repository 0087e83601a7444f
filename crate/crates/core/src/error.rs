use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical routines and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid needs at least 2 nodes, got {0}")]
    GridTooSmall(usize),

    #[error("grid nodes {first} and {second} coincide (value {value})")]
    DuplicateNode {
        first: usize,
        second: usize,
        value: f64,
    },

    #[error("grid node {index} is not finite")]
    NonFiniteNode { index: usize },

    #[error("derivative order exceeds degree: order {order}, degree {degree}")]
    OrderExceedsDegree { order: usize, degree: usize },

    #[error("weight overflow at index {index}")]
    WeightOverflow { index: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gamma factor undefined: n*u = {nu} must be below 1")]
    GammaUndefined { nu: f64 },

    #[error("no valid mapping parameter: n^beta * u = {value} must be below 1")]
    NoValidAlpha { value: f64 },

    #[error("map argument out of domain: |alpha * xi| = {0} exceeds 1")]
    MapDomain(f64),

    #[error(
        "test function provides derivatives up to order {available}, order {requested} requested"
    )]
    InsufficientDerivatives { requested: usize, available: usize },

    #[error("invalid experiment configuration: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
