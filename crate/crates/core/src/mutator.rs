//! Error injection: the eight mutation options used to build faulty
//! realizations.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::UnusableInstance;
use crate::oracle;
use crate::rng::RandomSource;

/// Gate kinds drawn by [`ErrorOption::InsertGates`].
pub const INSERTABLE_KINDS: [GateKind; 6] = [
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::H,
    GateKind::S,
    GateKind::T,
];

/// Toffolis added by the prefix/suffix options.
pub const TOFFOLI_COUNT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorOption {
    RemoveGates(u8),
    InsertGates(u8),
    ToffoliPrefix,
    ToffoliSuffix,
}

impl ErrorOption {
    pub const ALL: [ErrorOption; 8] = [
        ErrorOption::RemoveGates(1),
        ErrorOption::RemoveGates(2),
        ErrorOption::RemoveGates(3),
        ErrorOption::InsertGates(1),
        ErrorOption::InsertGates(2),
        ErrorOption::InsertGates(3),
        ErrorOption::ToffoliPrefix,
        ErrorOption::ToffoliSuffix,
    ];

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Change in gate count produced by this option.
    pub fn gate_delta(&self) -> isize {
        match *self {
            ErrorOption::RemoveGates(k) => -(k as isize),
            ErrorOption::InsertGates(k) => k as isize,
            ErrorOption::ToffoliPrefix | ErrorOption::ToffoliSuffix => TOFFOLI_COUNT as isize,
        }
    }
}

impl fmt::Display for ErrorOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorOption::RemoveGates(k) => write!(f, "remove-{k}"),
            ErrorOption::InsertGates(k) => write!(f, "insert-{k}"),
            ErrorOption::ToffoliPrefix => f.write_str("toffoli-begin"),
            ErrorOption::ToffoliSuffix => f.write_str("toffoli-end"),
        }
    }
}

impl FromStr for ErrorOption {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        ErrorOption::ALL
            .iter()
            .copied()
            .find(|o| o.to_string() == s)
            .ok_or_else(|| {
                let names: Vec<String> = ErrorOption::ALL.iter().map(|o| o.to_string()).collect();
                format!(
                    "unknown error option `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Returns a mutated copy of `circuit`; the input is left untouched.
pub fn mutate(
    circuit: &Circuit,
    option: ErrorOption,
    rng: &mut RandomSource,
) -> Result<Circuit, UnusableInstance> {
    let n = circuit.num_qubits();
    let mut out = circuit.clone();
    match option {
        ErrorOption::RemoveGates(k) => {
            let k = k as usize;
            let m = circuit.gate_count();
            if m < k {
                return Err(UnusableInstance(format!(
                    "cannot remove {k} gate(s) from a {m}-gate circuit"
                )));
            }
            let mut positions = sample(rng, m, k).into_vec();
            positions.sort_unstable_by(|a, b| b.cmp(a));
            for p in positions {
                out.remove(p);
            }
        }
        ErrorOption::InsertGates(k) => {
            for _ in 0..k {
                let kind = INSERTABLE_KINDS[rng.gen_range(0..INSERTABLE_KINDS.len())];
                let qubit = rng.gen_range(0..n);
                let pos = rng.gen_range(0..=out.gate_count());
                out.insert(pos, Gate::single(kind, qubit))
                    .expect("qubit drawn in range");
            }
        }
        ErrorOption::ToffoliPrefix | ErrorOption::ToffoliSuffix => {
            if n < 3 {
                return Err(UnusableInstance(format!(
                    "Toffoli insertion needs at least 3 qubits, circuit has {n}"
                )));
            }
            let toffolis: Vec<Gate> = (0..TOFFOLI_COUNT)
                .map(|_| {
                    let q = sample(rng, n, 3).into_vec();
                    Gate::toffoli(q[0], q[1], q[2])
                })
                .collect();
            if option == ErrorOption::ToffoliPrefix {
                for (i, g) in toffolis.into_iter().enumerate() {
                    out.insert(i, g).expect("qubits drawn in range");
                }
            } else {
                for g in toffolis {
                    out.try_push(g).expect("qubits drawn in range");
                }
            }
        }
    }
    Ok(out)
}

/// Whether the mutation changed the circuit's functionality, by oracle
/// average fidelity. `None` above the oracle's size limit.
pub fn is_functional_mutation(spec: &Circuit, mutated: &Circuit) -> Option<bool> {
    oracle::functionally_different(spec, mutated)
}
