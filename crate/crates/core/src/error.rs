//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("gate targets must be distinct")]
    DuplicateTargets,

    #[error("gate arity {arity} does not match {targets} target qubit(s)")]
    ArityMismatch { arity: usize, targets: usize },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("amplitude array length {len} is not a power of two")]
    InvalidDimension { len: usize },

    #[error("state vector has (near-)zero norm")]
    ZeroNorm,

    #[error("{requested} qubits exceeds the dense-simulation cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },

    #[error("partial trace requires a nonempty set of kept qubits")]
    EmptyKeepSet,

    #[error("operands have mismatched dimensions ({a} vs {b})")]
    DimensionMismatch { a: usize, b: usize },

    #[error("Pauli string length {got} does not match register count {expected}")]
    PauliLengthMismatch { expected: usize, got: usize },

    #[error("'{token}' is not a Pauli letter (expected I, X, Y or Z)")]
    UnknownPauliLetter { token: String },

    #[error("qubit {qubit} is entangled or not in a computational basis state")]
    QubitNotSeparable { qubit: usize },

    #[error("ancilla is not in |+> at the start of the entangling step")]
    AncillaNotPlus,

    #[error("ancilla-mediated CZ requires two distinct register qubits")]
    SameQubit,

    #[error("loss probability {value} outside [0, 1)")]
    InvalidLossProbability { value: f64 },

    #[error("parameter index {index} out of range for {num_params} parameter(s)")]
    ParamOutOfRange { index: usize, num_params: usize },

    #[error("parameter index {index} is never used by the circuit")]
    ParamUnused { index: usize },

    #[error("circuit {circuit} declares {got} parameters but the announcement fixes {expected}")]
    InconsistentParamCount {
        circuit: usize,
        expected: usize,
        got: usize,
    },

    #[error("announcement invalid: {0}")]
    AnnouncementInvalid(String),

    #[error("parameter vector has length {got}, announcement fixes {expected}")]
    ThetaLengthMismatch { expected: usize, got: usize },

    #[error(
        "attempt budget exhausted: {attempts} attempts produced {valid} of {needed} valid runs \
         (cap {cap}); loss rate is likely too high for the requested repetitions"
    )]
    AttemptBudgetExceeded {
        attempts: usize,
        valid: usize,
        needed: usize,
        cap: usize,
    },

    #[error(
        "exact audit cap exceeded: {registers} register(s) / {rounds} measurement round(s) \
         (cap {max_registers} registers, {max_rounds} rounds); use the sampled distribution test"
    )]
    AuditCapExceeded {
        registers: usize,
        rounds: usize,
        max_registers: usize,
        max_rounds: usize,
    },

    #[error("checkpoint unreachable: register qubit {qubit} never receives a full rotation")]
    CheckpointUnreachable { qubit: usize },

    #[error("transcript line {line}: {message}")]
    TranscriptParse { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),
}
