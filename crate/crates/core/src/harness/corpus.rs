//! Parametric benchmark circuits.

use std::f64::consts::PI;

use rand::Rng;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::rng::RandomSource;

/// Register sizes of the bundled corpus.
pub const BUNDLED_SIZES: [usize; 4] = [4, 8, 12, 16];

/// GHZ-state preparation: H on q0 followed by a CNOT chain.
pub fn ghz(n: usize) -> Circuit {
    let mut c = Circuit::named(n, format!("ghz_{n}"));
    c.push(Gate::single(GateKind::H, 0));
    for q in 1..n {
        c.push(Gate::cnot(q - 1, q));
    }
    c
}

/// Quantum Fourier transform over H and controlled phase, with the final
/// qubit reversal written as CNOT swaps.
pub fn qft(n: usize) -> Circuit {
    let mut c = Circuit::named(n, format!("qft_{n}"));
    for j in (0..n).rev() {
        c.push(Gate::single(GateKind::H, j));
        for k in (0..j).rev() {
            let angle = PI / (1u64 << (j - k)) as f64;
            c.push(Gate::controlled(GateKind::Phase(angle), k, j));
        }
    }
    for q in 0..n / 2 {
        let (a, b) = (q, n - 1 - q);
        c.push(Gate::cnot(a, b))
            .push(Gate::cnot(b, a))
            .push(Gate::cnot(a, b));
    }
    c
}

/// Random circuit of `m` gates drawn uniformly from {H, S, T, CNOT}.
pub fn random_clifford_t(n: usize, m: usize, seed: u64) -> Circuit {
    let mut rng = RandomSource::new(seed);
    let mut c = Circuit::named(n, format!("clifft_{n}"));
    for _ in 0..m {
        let choice = if n >= 2 {
            rng.gen_range(0..4)
        } else {
            rng.gen_range(0..3)
        };
        let q = rng.gen_range(0..n);
        let g = match choice {
            0 => Gate::single(GateKind::H, q),
            1 => Gate::single(GateKind::S, q),
            2 => Gate::single(GateKind::T, q),
            _ => {
                let mut t = rng.gen_range(0..n - 1);
                if t >= q {
                    t += 1;
                }
                Gate::cnot(q, t)
            }
        };
        c.push(g);
    }
    c
}

/// The bundled corpus: GHZ, QFT and random Clifford+T (10n gates) at every
/// size in [`BUNDLED_SIZES`].
pub fn bundled(seed: u64) -> Vec<Circuit> {
    bundled_with_sizes(&BUNDLED_SIZES, seed)
}

pub fn bundled_with_sizes(sizes: &[usize], seed: u64) -> Vec<Circuit> {
    let mut out = Vec::new();
    for &n in sizes {
        out.push(ghz(n));
        out.push(qft(n));
        out.push(random_clifford_t(n, 10 * n, seed.wrapping_add(n as u64)));
    }
    out
}
