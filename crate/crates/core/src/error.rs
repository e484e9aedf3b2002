use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("occupation {requested} exceeds the configured cap n_max = {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("generator of dimension {generator} does not belong to occupation {occupation}")]
    DimensionMismatch { occupation: usize, generator: usize },

    #[error("propagator orthogonality defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotOrthogonal { defect: f64, tolerance: f64 },

    #[error("coefficients have squared norm {norm}, expected 1 within {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("cumulative normalization drift {drift:e} exceeds limit {limit:e} at slice {slice}")]
    NormalizationDrift {
        drift: f64,
        limit: f64,
        slice: usize,
    },

    #[error("path oracle needs {required} paths, budget is {budget}")]
    PathBudget { required: u128, budget: u128 },

    #[error("dense radiation state needs dimension {required}, limit is {limit}")]
    DenseLimit { required: usize, limit: usize },

    #[error("slice index {index} outside 1..={slices}")]
    InvalidSlice { index: usize, slices: usize },

    #[error("occupation {0} is outside the evolved state's range")]
    InvalidOccupation(usize),

    #[error("log base must be at least 2, got {0}")]
    InvalidLogBase(u32),

    #[error("argument {value} outside domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("eigendecomposition failed to converge for dimension {0}")]
    EigenFailure(usize),
}
