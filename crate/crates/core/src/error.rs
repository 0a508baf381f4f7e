use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the range the operation is defined on.
    #[error("{what} = {value} is out of range (must be < {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    #[error("lookup table needs {requested} entries but capacity is {capacity}")]
    CapacityExceeded { requested: u64, capacity: u64 },

    #[error("layout needs {requested} qubits but the simulator is capped at {capacity}")]
    TooManyQubits { requested: usize, capacity: usize },

    #[error("ancilla count {count} outside the supported range [0, {max}]")]
    AncillaOutOfRange { count: usize, max: usize },

    /// Multi-controlled gates have no duration or noise semantics of their own.
    #[error("multi-controlled gate {0} must be decomposed before timed or noisy execution")]
    Undecomposed(String),

    #[error("qubit {qubit} is not part of a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("gate {0} touches the same qubit twice")]
    RepeatedQubit(String),

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("fit domain: {0}")]
    FitDomain(String),

    #[error("matrix does not commute with group generator x = {generator}")]
    NotSymmetric { generator: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
