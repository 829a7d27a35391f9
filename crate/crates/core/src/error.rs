use thiserror::Error;

use crate::circuit::Gate;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("qubit index {qubit} out of range for {num_qubits} qubit(s)")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate `{0}` uses the same qubit twice")]
    DuplicateQubit(Gate),
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{requested} qubits exceeds the state-vector limit of {max}")]
    TooManyQubits { requested: usize, max: usize },
    #[error("state vector needs at least one qubit")]
    NoQubits,
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("amplitude array of length {0} is not a power of two")]
    BadLength(usize),
}

/// Failure of a size-limited brute-force computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{op} supports at most {max} qubits, got {requested}")]
    SizeLimit {
        op: &'static str,
        requested: usize,
        max: usize,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("specification has {spec} qubits but realization has {imp}")]
    QubitCountMismatch { spec: usize, imp: usize },
    #[error("epsilon must lie in (0, 0.5), got {0}")]
    BadEpsilon(f64),
    #[error("stimulus budget must be at least 1")]
    EmptyBudget,
    #[error("exhaustive enumeration supports at most {max} qubits, got {requested}")]
    ExhaustiveLimit { requested: usize, max: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// A mutation whose preconditions do not hold for the given circuit.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("unusable instance: {0}")]
pub struct UnusableInstance(pub String);
