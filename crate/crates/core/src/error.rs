use thiserror::Error;

/// Failures raised anywhere along the breather pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: half-width must be at least 1 (got {0})")]
    InvalidGrid(usize),
    #[error("potential table has {got} values but the grid has {expected} sites")]
    PotentialSize { expected: usize, got: usize },
    #[error("potential value at site {0} is not finite")]
    NonFinitePotential(i64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not symmetric")]
    NotSymmetric,
    #[error("no discrete eigenvalue outside the band [0, 4]")]
    NoDiscreteSpectrum,
    #[error("{0} discrete eigenvalues found; exactly one is required")]
    MultipleEigenvalues(usize),
    #[error("m^2 + e = {0} is not positive")]
    InvalidFrequency(f64),
    #[error("harmonic {n}: lambda_n = {lambda} lies in the band [0, 4]")]
    AssumptionViolated { n: usize, lambda: f64 },
    #[error("shift {0} is within tolerance of an eigenvalue")]
    SingularShift(f64),
    #[error("right-hand side has overlap {0:e} with the eigenvector")]
    NonOrthogonalRhs(f64),
    #[error("weighted-conjugation contraction diverged at a = {0}")]
    ContractionDiverged(f64),
    #[error("decay fit window is empty")]
    FitWindowEmpty,
    #[error("no convergence after {iterations} iterations (last update {last_update:e}, ratio {ratio:.3e})")]
    NoConvergence {
        iterations: usize,
        last_update: f64,
        ratio: f64,
    },
    #[error("state norm exceeded {0:e} during integration")]
    BlowUp(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
