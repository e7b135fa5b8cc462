use alloc::string::String;

/// Everything the simulation core can reject.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("metric is not positive semi-definite (smallest eigenvalue {min_eigenvalue:e})")]
    Metric { min_eigenvalue: f64 },
    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    Symmetry { max_asymmetry: f64 },
    #[error("perturbation norm {ratio} is not small against the flat metric (ratio must be < 1)")]
    PerturbationTooLarge { ratio: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("step size {dt:e} violates the stability guard (dt*omega_max = {product} >= 0.1)")]
    StepSize { dt: f64, product: f64 },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid time grid: {0}")]
    Grid(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("invalid phase distribution: {0}")]
    Distribution(String),
    #[error("sample size {got} below the minimum {min}")]
    SampleSize { got: usize, min: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
