//! Circuit intermediate representation and single-qubit gate semantics.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::CircuitError;

/// A 2×2 complex matrix in row-major order.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Base kind of a gate. Controls are carried by [`Gate`], never by the kind.
///
/// Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    RX(f64),
    RY(f64),
    RZ(f64),
    Phase(f64),
    U3(f64, f64, f64),
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl GateKind {
    /// The 2×2 unitary of this kind.
    pub fn matrix(&self) -> Matrix2 {
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match *self {
            GateKind::I => [[one, zero], [zero, one]],
            GateKind::X => [[zero, one], [one, zero]],
            GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
            GateKind::Z => [[one, zero], [zero, c(-1.0, 0.0)]],
            GateKind::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            GateKind::S => [[one, zero], [zero, c(0.0, 1.0)]],
            GateKind::Sdg => [[one, zero], [zero, c(0.0, -1.0)]],
            GateKind::T => [[one, zero], [zero, c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)]],
            GateKind::Tdg => [[one, zero], [zero, c(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)]],
            GateKind::RX(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            GateKind::RY(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            GateKind::RZ(theta) => [
                [Complex64::from_polar(1.0, -theta / 2.0), zero],
                [zero, Complex64::from_polar(1.0, theta / 2.0)],
            ],
            GateKind::Phase(lambda) => [[one, zero], [zero, Complex64::from_polar(1.0, lambda)]],
            GateKind::U3(theta, phi, lambda) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [
                    [c(co, 0.0), -Complex64::from_polar(s, lambda)],
                    [
                        Complex64::from_polar(s, phi),
                        Complex64::from_polar(co, phi + lambda),
                    ],
                ]
            }
        }
    }

    /// True if the matrix is diagonal for every parameter value.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            GateKind::I
                | GateKind::Z
                | GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::RZ(_)
                | GateKind::Phase(_)
        )
    }

    /// Parameters of the kind, in declaration order.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::RX(a) | GateKind::RY(a) | GateKind::RZ(a) | GateKind::Phase(a) => vec![a],
            GateKind::U3(a, b, c) => vec![a, b, c],
            _ => Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::I => "id",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::RX(_) => "rx",
            GateKind::RY(_) => "ry",
            GateKind::RZ(_) => "rz",
            GateKind::Phase(_) => "p",
            GateKind::U3(..) => "u3",
        }
    }
}

/// Matrix of a gate kind. Controls are applied by the simulator.
pub fn base_matrix(kind: GateKind) -> Matrix2 {
    kind.matrix()
}

/// A single-qubit base kind applied to `target`, conditioned on every qubit
/// in `controls` being 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<usize>,
    pub target: usize,
}

impl Gate {
    pub fn single(kind: GateKind, target: usize) -> Self {
        Gate {
            kind,
            controls: Vec::new(),
            target,
        }
    }

    pub fn controlled(kind: GateKind, control: usize, target: usize) -> Self {
        Gate {
            kind,
            controls: vec![control],
            target,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::controlled(GateKind::X, control, target)
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Gate {
            kind: GateKind::X,
            controls: vec![c0, c1],
            target,
        }
    }

    /// All qubits the gate touches, controls first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls
            .iter()
            .copied()
            .chain(std::iter::once(self.target))
    }

    fn check(&self, num_qubits: usize) -> Result<(), CircuitError> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits,
                });
            }
        }
        let mut seen: Vec<usize> = self.qubits().collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(CircuitError::DuplicateQubit(self.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in &self.controls {
            f.write_str("c")?;
        }
        f.write_str(self.kind.name())?;
        let params = self.kind.params();
        if !params.is_empty() {
            let p: Vec<String> = params.iter().map(|x| format!("{x}")).collect();
            write!(f, "({})", p.join(","))?;
        }
        let qs: Vec<String> = self.qubits().map(|q| format!("q{q}")).collect();
        write!(f, " {}", qs.join(","))
    }
}

/// An ordered gate sequence over `num_qubits` qubits.
///
/// Equality is structural: same register size and same gate sequence. The
/// name is a label and does not take part. Two circuits with the same
/// functionality but different gate lists compare unequal; see
/// [`crate::oracle`] for functional comparison.
#[derive(Clone, Debug)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    pub name: String,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit::named(num_qubits, "")
    }

    pub fn named(num_qubits: usize, name: impl Into<String>) -> Self {
        assert!(num_qubits >= 1, "a circuit needs at least one qubit");
        Circuit {
            num_qubits,
            gates: Vec::new(),
            name: name.into(),
        }
    }

    /// Builds a circuit from a gate list, validating every gate.
    pub fn from_gates(
        num_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        let mut circuit = Circuit::new(num_qubits);
        for g in gates {
            circuit.try_push(g)?;
        }
        Ok(circuit)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn try_push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.check(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate, panicking if it does not fit the circuit.
    pub fn push(&mut self, gate: Gate) -> &mut Self {
        if let Err(e) = self.try_push(gate) {
            panic!("invalid gate: {e}");
        }
        self
    }

    pub fn insert(&mut self, index: usize, gate: Gate) -> Result<(), CircuitError> {
        gate.check(self.num_qubits)?;
        self.gates.insert(index, gate);
        Ok(())
    }

    pub fn remove(&mut self, index: usize) -> Gate {
        self.gates.remove(index)
    }

    /// Appends all gates of `other`, which must act on the same register size.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.num_qubits != self.num_qubits {
            return Err(CircuitError::QubitCountMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits && self.gates == other.gates
    }
}

/// Number of gates in the circuit.
pub fn gate_count(circuit: &Circuit) -> usize {
    circuit.gate_count()
}
