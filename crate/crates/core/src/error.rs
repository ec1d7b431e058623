use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QspError {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("duplicate qubit index {0} in gate targets")]
    DuplicateQubit(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("input is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("circuit has unbound parameter slot {0}")]
    UnboundSlot(usize),
    #[error("parameter vector length mismatch: expected {expected}, got {got}")]
    ParamLength { expected: usize, got: usize },
    #[error("at least {min} qubits required, got {got}")]
    TooFewQubits { min: usize, got: usize },
    #[error("{0} qubits exceeds the dense-simulation limit")]
    TooManyQubits(usize),
    #[error("phase vector does not describe a special unitary: sum residual {residual} (mod 2pi)")]
    NotSpecialUnitary { residual: f64 },
    #[error("invalid state specification: {0}")]
    InvalidSpec(String),
    #[error("QASM parse error on line {line}: {msg}")]
    Qasm { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("training stage {stage} failed: {msg}")]
    Training { stage: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, QspError>;
