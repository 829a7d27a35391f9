//! Random circuit generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;

use qcheck::{Circuit, Gate, GateKind, RandomSource};

fn angle(rng: &mut RandomSource) -> f64 {
    rng.gen_range(-2.0 * PI..2.0 * PI)
}

fn random_kind(rng: &mut RandomSource) -> GateKind {
    use GateKind::*;
    match rng.gen_range(0..14) {
        0 => I,
        1 => X,
        2 => Y,
        3 => Z,
        4 => H,
        5 => S,
        6 => Sdg,
        7 => T,
        8 => Tdg,
        9 => RX(angle(rng)),
        10 => RY(angle(rng)),
        11 => RZ(angle(rng)),
        12 => Phase(angle(rng)),
        _ => U3(angle(rng), angle(rng), angle(rng)),
    }
}

fn distinct_qubits(n: usize, k: usize, rng: &mut RandomSource) -> Vec<usize> {
    rand::seq::index::sample(rng, n, k).into_vec()
}

/// A random gate from the whole gate set, restricted to the controlled
/// forms OpenQASM 2.0's standard library can express.
pub fn random_gate(n: usize, rng: &mut RandomSource) -> Gate {
    let controls = match n {
        1 => 0,
        2 => rng.gen_range(0..2),
        _ => rng.gen_range(0..3),
    };
    match controls {
        0 => Gate::single(random_kind(rng), rng.gen_range(0..n)),
        1 => {
            let q = distinct_qubits(n, 2, rng);
            let kind = loop {
                let k = random_kind(rng);
                if !matches!(
                    k,
                    GateKind::I | GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg
                ) {
                    break k;
                }
            };
            Gate::controlled(kind, q[0], q[1])
        }
        _ => {
            let q = distinct_qubits(n, 3, rng);
            Gate::toffoli(q[0], q[1], q[2])
        }
    }
}

pub fn random_circuit(n: usize, m: usize, rng: &mut RandomSource) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..m {
        c.push(random_gate(n, rng));
    }
    c
}

/// A random circuit over {H, S, T, CNOT}.
pub fn random_clifford_t(n: usize, m: usize, rng: &mut RandomSource) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..m {
        let q = rng.gen_range(0..n);
        match rng.gen_range(0..if n > 1 { 4 } else { 3 }) {
            0 => c.push(Gate::single(GateKind::H, q)),
            1 => c.push(Gate::single(GateKind::S, q)),
            2 => c.push(Gate::single(GateKind::T, q)),
            _ => {
                let p = distinct_qubits(n, 2, rng);
                c.push(Gate::cnot(p[0], p[1]))
            }
        };
    }
    c
}

/// A random Clifford circuit over {H, S, CNOT}.
pub fn random_clifford(n: usize, m: usize, rng: &mut RandomSource) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..m {
        let q = rng.gen_range(0..n);
        match rng.gen_range(0..if n > 1 { 3 } else { 2 }) {
            0 => c.push(Gate::single(GateKind::H, q)),
            1 => c.push(Gate::single(GateKind::S, q)),
            _ => {
                let p = distinct_qubits(n, 2, rng);
                c.push(Gate::cnot(p[0], p[1]))
            }
        };
    }
    c
}

/// `base` with `error` applied before it: the realization U·E.
pub fn with_error_first(base: &Circuit, error: &[Gate]) -> Circuit {
    let mut gates = error.to_vec();
    gates.extend_from_slice(base.gates());
    Circuit::from_gates(base.num_qubits(), gates).expect("gates fit the register")
}
