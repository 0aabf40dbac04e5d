use thiserror::Error;

/// Everything that can go wrong while building data or evaluating.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is singular or too ill-conditioned to invert")]
    SingularMatrix,
    #[error("coordinate {name}[{index}] = {value} is within 1e-9 of an integer")]
    NearInteger {
        name: &'static str,
        index: usize,
        value: f64,
    },
    #[error("coordinate {name}[{index}] = {value} must lie in (0,1)")]
    OutOfUnitCube {
        name: &'static str,
        index: usize,
        value: f64,
    },
    #[error("matrix entry ({row},{col}) = {value} is not strictly positive")]
    NonPositiveMatrix { row: usize, col: usize, value: f64 },
    #[error("coefficient a must be nonzero")]
    ZeroMatrix,
    #[error("spectral point outside the supported region: {0}")]
    Region(String),
    #[error("gamma factor has a pole at component {index}")]
    GammaPole { index: usize },
    #[error("contour prefactor has a pole at component {index} (positive integer)")]
    PrefactorPole { index: usize },
    #[error("contour radius {radius} violates the pole-clearance bound {bound}")]
    PoleClearance { radius: f64, bound: f64 },
    #[error("series truncation cannot reach tolerance {tol:e} within box size {max_box}")]
    TruncationFailure { tol: f64, max_box: usize },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("multi-index {k:?} does not satisfy the parity condition for chi = {chi:?}")]
    ParityMismatch { k: Vec<u32>, chi: Vec<u8> },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
