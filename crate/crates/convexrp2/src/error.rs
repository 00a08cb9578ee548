use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vectors do not span a plane")]
    DegenerateSpan,
    #[error("flags are not in generic position")]
    NonGenericFlags,
    #[error("cross ratio undefined for coincident arguments")]
    DegenerateCrossRatio,
    #[error("non-positive invariant {key} = {value}")]
    NotPositive { key: String, value: f64 },
    #[error("matrix is not loxodromic")]
    NotLoxodromic,
    #[error("gluing produced inconsistent flags (residual {0:e})")]
    GluingInconsistent(f64),
    #[error("no valid lift for slope ({0}, {1})")]
    NoValidLift(i64, i64),
    #[error("point lies outside the domain")]
    PointOutsideDomain,
    #[error("region is not contained in the domain")]
    RegionOutsideDomain,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("unsupported argument {0}")]
    UnsupportedArgument(f64),
    #[error("need at least {min} samples, got {got}")]
    InsufficientSamples { min: usize, got: usize },
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
