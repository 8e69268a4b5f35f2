use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("grid bounds must satisfy r_max > r_min, got [{r_min}, {r_max}]")]
    GridBounds { r_min: f64, r_max: f64 },

    #[error("step packet needs at least 2 qubits (M/4 >= 1), got {0}")]
    PacketTooCoarse(usize),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("input contains a non-finite value")]
    NonFinite,

    #[error("matrix is not Hermitian (max |H - H^dag| = {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    #[error("Z-string mask must be non-zero")]
    EmptyMask,

    #[error("mask {mask:#x} does not fit in {n} qubits")]
    MaskOutOfRange { mask: usize, n: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndex { index: usize, n: usize },

    #[error("resample target {target} must be a power-of-two multiple of {from}")]
    ResampleTarget { from: usize, target: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("circuit uses {circuit} qubits but the coupling map covers {target}")]
    CircuitTooWide { circuit: usize, target: usize },

    #[error("gate kind {0} is not in the transpile target's basis set")]
    MissingBasisGate(&'static str),

    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
