//! Brute-force ground truth for small registers.
//!
//! Everything here is built from explicit 2^n × 2^n matrices, independent of
//! the stride kernels in [`crate::sim`], so the two can check each other.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::OracleError;
use crate::sim::{self, StateVector};

/// Largest register for which full unitaries are built.
pub const ORACLE_MAX_QUBITS: usize = 6;
/// Largest register for the |Ω⟩ cross-check (the doubled state has 2n qubits).
pub const OMEGA_MAX_QUBITS: usize = 6;
/// Largest register for exact averaging over all 6^n local stimuli.
pub const LOCAL_AVERAGE_MAX_QUBITS: usize = 6;

/// Gap below 1 at which two unitaries count as functionally different.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        UnitaryMatrix { dim, data }
    }

    /// Builds a matrix from rows. Panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "matrix rows must be square");
            data.extend_from_slice(r);
        }
        UnitaryMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    /// self · other
    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        UnitaryMatrix { dim: d, data: out }
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.data[i * d + j].conj();
            }
        }
        UnitaryMatrix { dim: d, data: out }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn scaled(&self, s: Complex64) -> UnitaryMatrix {
        UnitaryMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Largest entrywise deviation of M†M from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = UnitaryMatrix::identity(self.dim);
        p.data
            .iter()
            .zip(&id.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The full 2^n × 2^n matrix of a single (possibly controlled) gate, written
/// out entry by entry.
pub fn gate_unitary(gate: &Gate, num_qubits: usize) -> UnitaryMatrix {
    let dim = 1usize << num_qubits;
    let m = gate.kind.matrix();
    let t = gate.target;
    let cmask = gate.controls.iter().fold(0usize, |acc, &c| acc | (1 << c));
    let mut data = vec![ZERO; dim * dim];
    for col in 0..dim {
        if col & cmask != cmask {
            data[col * dim + col] = ONE;
            continue;
        }
        let in_bit = (col >> t) & 1;
        for (out_bit, m_row) in m.iter().enumerate() {
            let row = (col & !(1 << t)) | (out_bit << t);
            data[row * dim + col] = m_row[in_bit];
        }
    }
    UnitaryMatrix { dim, data }
}

fn check_limit(op: &'static str, n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        return Err(OracleError::SizeLimit {
            op,
            requested: n,
            max,
        });
    }
    Ok(())
}

fn check_dims(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<(), OracleError> {
    if u.dim != v.dim {
        return Err(OracleError::DimensionMismatch {
            left: u.dim,
            right: v.dim,
        });
    }
    Ok(())
}

/// U = U_{m−1} · … · U_0 for the circuit's gates g_0 … g_{m−1}.
pub fn build_unitary(circuit: &Circuit) -> Result<UnitaryMatrix, OracleError> {
    let n = circuit.num_qubits();
    check_limit("build_unitary", n, ORACLE_MAX_QUBITS)?;
    let mut u = UnitaryMatrix::identity(1 << n);
    for g in circuit.gates() {
        u = gate_unitary(g, n).mul(&u);
    }
    Ok(u)
}

/// 4^{−n} |tr(U†V)|².
pub fn ent_fidelity(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64, OracleError> {
    check_dims(u, v)?;
    let d = u.dim as f64;
    // tr(U†V) = Σ_ij conj(U_ij) V_ij
    let tr: Complex64 = u.data.iter().zip(&v.data).map(|(a, b)| a.conj() * b).sum();
    Ok((tr.norm_sqr() / (d * d)).clamp(0.0, 1.0))
}

/// Average gate fidelity via (2^n · F_ent + 1) / (2^n + 1).
pub fn avg_fidelity(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64, OracleError> {
    let fe = ent_fidelity(u, v)?;
    let d = u.dim as f64;
    Ok(((d * fe + 1.0) / (d + 1.0)).clamp(0.0, 1.0))
}

/// Entanglement fidelity obtained by simulating both circuits on the first
/// half of the maximally entangled 2n-qubit state |Ω⟩.
pub fn ent_fidelity_via_omega(spec: &Circuit, imp: &Circuit) -> Result<f64, OracleError> {
    let n = spec.num_qubits();
    if imp.num_qubits() != n {
        return Err(OracleError::DimensionMismatch {
            left: 1 << n,
            right: 1 << imp.num_qubits(),
        });
    }
    check_limit("ent_fidelity_via_omega", n, OMEGA_MAX_QUBITS)?;
    let omega = omega_state(n)?;
    let widen = |c: &Circuit| {
        let mut wide = Circuit::new(2 * n);
        for g in c.gates() {
            wide.push(g.clone());
        }
        wide
    };
    let a = sim::simulate(&widen(spec), &omega)?;
    let b = sim::simulate(&widen(imp), &omega)?;
    Ok(sim::fidelity(&a, &b)?)
}

/// 2^{−n/2} Σ_j |j⟩|j⟩, with the system on qubits 0..n and the copy on n..2n.
pub fn omega_state(n: usize) -> Result<StateVector, OracleError> {
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim * dim];
    let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    for j in 0..dim {
        amps[j | (j << n)] = a;
    }
    Ok(StateVector::from_amplitudes(amps)?)
}

/// The six single-qubit local stimulus states |0⟩, |1⟩, |+⟩, |−⟩, |↑⟩, |↓⟩.
pub fn local_basis_vectors() -> [[Complex64; 2]; 6] {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let ri = Complex64::new(0.0, FRAC_1_SQRT_2);
    [[ONE, ZERO], [ZERO, ONE], [r, r], [r, -r], [r, ri], [r, -ri]]
}

/// Product state for `labels` (qubit k takes `local_basis_vectors()[labels[k]]`).
pub fn local_product_state(labels: &[usize]) -> Vec<Complex64> {
    let six = local_basis_vectors();
    let n = labels.len();
    (0..1usize << n)
        .map(|i| {
            labels
                .iter()
                .enumerate()
                .map(|(k, &l)| six[l][(i >> k) & 1])
                .product()
        })
        .collect()
}

/// Exact mean of F(U|l⟩, V|l⟩) over all 6^n local stimuli.
pub fn mean_local_fidelity(spec: &Circuit, imp: &Circuit) -> Result<f64, OracleError> {
    let n = spec.num_qubits();
    check_limit("mean_local_fidelity", n, LOCAL_AVERAGE_MAX_QUBITS)?;
    let u = build_unitary(spec)?;
    let v = build_unitary(imp)?;
    check_dims(&u, &v)?;
    let w = u.adjoint().mul(&v);
    let total = 6usize.pow(n as u32);
    let mut labels = vec![0usize; n];
    let mut sum = 0.0;
    for idx in 0..total {
        let mut x = idx;
        for l in labels.iter_mut() {
            *l = x % 6;
            x /= 6;
        }
        let psi = local_product_state(&labels);
        let wpsi = w.apply(&psi);
        let overlap: Complex64 = psi.iter().zip(&wpsi).map(|(a, b)| a.conj() * b).sum();
        sum += overlap.norm_sqr();
    }
    Ok((sum / total as f64).clamp(0.0, 1.0))
}

/// True iff U = e^{iθ} V for some θ, within `tol` per entry.
pub fn equal_up_to_phase(u: &UnitaryMatrix, v: &UnitaryMatrix, tol: f64) -> bool {
    if u.dim != v.dim {
        return false;
    }
    // pick the phase from the largest entry of V
    let (idx, _) = v
        .data
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bn), (i, z)| {
            if z.norm() > bn {
                (i, z.norm())
            } else {
                (bi, bn)
            }
        });
    if v.data[idx].norm() == 0.0 {
        return false;
    }
    let phase = u.data[idx] / v.data[idx];
    if (phase.norm() - 1.0).abs() > tol {
        return false;
    }
    u.max_abs_diff(&v.scaled(phase)) <= tol
}

/// Whether two circuits differ functionally, judged by average fidelity.
///
/// `None` when the register is too large for the oracle.
pub fn functionally_different(spec: &Circuit, imp: &Circuit) -> Option<bool> {
    if spec.num_qubits() != imp.num_qubits() {
        return Some(true);
    }
    let u = build_unitary(spec).ok()?;
    let v = build_unitary(imp).ok()?;
    avg_fidelity(&u, &v)
        .ok()
        .map(|f| f < 1.0 - EQUIVALENCE_TOLERANCE)
}
