//! Simulative equivalence checking for quantum circuits.
//!
//! A specification circuit and a realization are simulated side by side on
//! randomly drawn stimuli (classical basis states, local product states, or
//! random Clifford states) and compared through output-state fidelity.

pub mod circuit;
pub mod equivalence;
pub mod error;
pub mod harness;
pub mod mutator;
pub mod oracle;
pub mod qasm;
pub mod rng;
pub mod sim;
pub mod stimuli;

pub use circuit::{base_matrix, gate_count, Circuit, Gate, GateKind};
pub use equivalence::{
    verify, verify_exhaustive_local, Verdict, VerificationConfig, VerificationReport,
};
pub use error::{CircuitError, OracleError, SimError, UnusableInstance, VerifyError};
pub use mutator::{mutate, ErrorOption};
pub use qasm::{emit_qasm, parse_qasm, ParseDiagnostic};
pub use rng::RandomSource;
pub use sim::{fidelity, simulate, zero_state, StateVector};
pub use stimuli::{Scheme, Stimulus};
