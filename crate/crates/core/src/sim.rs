//! Dense state-vector simulation.
//!
//! Amplitude `i` belongs to the basis state whose bit `k` is the value of
//! qubit `k`, so qubit 0 is the least significant bit. Gates are applied in
//! place with stride arithmetic; no 2^n × 2^n matrix is ever built.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::SimError;

/// Default upper bound on the number of simulated qubits.
pub const DEFAULT_MAX_QUBITS: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n` qubits, subject to [`DEFAULT_MAX_QUBITS`].
    pub fn zero(n: usize) -> Result<Self, SimError> {
        Self::zero_with_limit(n, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_limit(n: usize, max: usize) -> Result<Self, SimError> {
        Self::basis_with_limit(n, 0, max)
    }

    /// Computational basis state |index⟩.
    pub fn basis(n: usize, index: usize) -> Result<Self, SimError> {
        Self::basis_with_limit(n, index, DEFAULT_MAX_QUBITS)
    }

    fn basis_with_limit(n: usize, index: usize, max: usize) -> Result<Self, SimError> {
        if n == 0 {
            return Err(SimError::NoQubits);
        }
        if n > max {
            return Err(SimError::TooManyQubits { requested: n, max });
        }
        let dim = 1usize << n;
        assert!(index < dim, "basis index {index} out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    /// Wraps raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        Ok(StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn scale_phase(&mut self, theta: f64) {
        let p = Complex64::from_polar(1.0, theta);
        self.amps.iter_mut().for_each(|a| *a *= p);
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, SimError> {
        if self.num_qubits != other.num_qubits {
            return Err(SimError::QubitCountMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies one gate in place.
    ///
    /// # Panics
    ///
    /// If a qubit index of the gate is not below `num_qubits`.
    pub fn apply(&mut self, gate: &Gate) {
        for q in gate.qubits() {
            assert!(
                q < self.num_qubits,
                "gate `{gate}` addresses qubit {q} of a {}-qubit state",
                self.num_qubits
            );
        }
        let stride = 1usize << gate.target;
        let cmask = gate.controls.iter().fold(0usize, |m, &c| m | (1 << c));
        match gate.kind {
            GateKind::I => {}
            GateKind::X => self.for_each_pair(stride, cmask, std::mem::swap),
            kind if kind.is_diagonal() => {
                let m = kind.matrix();
                let (d0, d1) = (m[0][0], m[1][1]);
                let mask = cmask | stride;
                if d0 == Complex64::new(1.0, 0.0) {
                    // only amplitudes with target and controls set change
                    for (i, a) in self.amps.iter_mut().enumerate() {
                        if i & mask == mask {
                            *a *= d1;
                        }
                    }
                } else {
                    for (i, a) in self.amps.iter_mut().enumerate() {
                        if i & cmask == cmask {
                            *a *= if i & stride == 0 { d0 } else { d1 };
                        }
                    }
                }
            }
            kind => {
                let m = kind.matrix();
                self.for_each_pair(stride, cmask, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = m[0][0] * x + m[0][1] * y;
                    *b = m[1][0] * x + m[1][1] * y;
                });
            }
        }
    }

    /// Visits every amplitude pair (i, i | stride) with the target bit of `i`
    /// clear and all control bits set.
    fn for_each_pair(
        &mut self,
        stride: usize,
        cmask: usize,
        mut f: impl FnMut(&mut Complex64, &mut Complex64),
    ) {
        for (k, block) in self.amps.chunks_exact_mut(stride << 1).enumerate() {
            let start = k * (stride << 1);
            let (lo, hi) = block.split_at_mut(stride);
            if cmask == 0 {
                lo.iter_mut().zip(hi.iter_mut()).for_each(|(a, b)| f(a, b));
            } else {
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    if (start + j) & cmask == cmask {
                        f(a, b);
                    }
                }
            }
        }
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(SimError::QubitCountMismatch {
                left: circuit.num_qubits(),
                right: self.num_qubits,
            });
        }
        for g in circuit.gates() {
            self.apply(g);
        }
        Ok(())
    }
}

/// |0…0⟩ on `n` qubits.
pub fn zero_state(n: usize) -> Result<StateVector, SimError> {
    StateVector::zero(n)
}

/// Returns `state` with `gate` applied.
pub fn apply_gate(mut state: StateVector, gate: &Gate) -> StateVector {
    state.apply(gate);
    state
}

/// Folds the circuit's gates over `initial`, in order.
pub fn simulate(circuit: &Circuit, initial: &StateVector) -> Result<StateVector, SimError> {
    let mut state = initial.clone();
    state.run(circuit)?;
    Ok(state)
}

/// |⟨a|b⟩|², clamped to [0, 1].
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, SimError> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}
