use thiserror::Error;

/// Everything that can go wrong while building models or evaluating them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("invalid model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),

    #[error("step set is periodic with period {period}; asymptotic results need an aperiodic walk")]
    PeriodicModel { period: u64 },

    #[error("operation requires a Lukasiewicz step set (single down jump of size 1), got c = {c}")]
    NotLukasiewicz { c: i32 },

    #[error("no root of 1 - z P0>=(u1(z)) in (0, rho]: the model is subcritical")]
    NoRho1,

    #[error("inconsistent case: {0}")]
    InconsistentCase(String),

    #[error("root finding did not converge: {0}")]
    RootFinding(String),

    #[error("kernel branches collide at z = {z}")]
    BranchDegenerate { z: String },

    #[error("numerically singular linear system at z = {z}")]
    NumericalSingularity { z: String },

    #[error("no excursions of length {n}")]
    NoExcursions { n: usize },

    #[error("no meander of length {n} survives")]
    NoSurvivors { n: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("n = {n} exceeds the enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("degenerate limit law: {0}")]
    DegenerateLaw(String),

    #[error("floating-point masses underflow at length {n}")]
    Underflow { n: usize },
}

impl Error {
    /// True for failures of the floating-point machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RootFinding(_)
                | Error::BranchDegenerate { .. }
                | Error::NumericalSingularity { .. }
                | Error::Underflow { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
