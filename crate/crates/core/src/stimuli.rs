//! Random stimulus generation.
//!
//! A stimulus is a preparation circuit applied to |0…0⟩. Three schemes are
//! provided, in increasing expressiveness and cost:
//!
//! * classical: a uniformly random computational basis state,
//! * local quantum: a product of single-qubit states drawn from
//!   {|0⟩, |1⟩, |+⟩, |−⟩, |↑⟩, |↓⟩},
//! * global quantum: `l` random layers of H, S and CNOT gates, which for
//!   `l` proportional to `n` approximate a unitary 2-design.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::SimError;
use crate::rng::{DrawTag, RandomSource};
use crate::sim::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Classical,
    LocalQuantum,
    /// `None` means one layer per qubit.
    GlobalQuantum {
        layers: Option<usize>,
    },
}

impl Scheme {
    pub const fn global() -> Self {
        Scheme::GlobalQuantum { layers: None }
    }

    pub const fn global_with_layers(layers: usize) -> Self {
        Scheme::GlobalQuantum {
            layers: Some(layers),
        }
    }

    /// Short label used on the command line and in reports.
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Classical => "classical",
            Scheme::LocalQuantum => "local",
            Scheme::GlobalQuantum { .. } => "global",
        }
    }

    /// Layer count used for an `n`-qubit register.
    pub fn layers_for(&self, n: usize) -> Option<usize> {
        match *self {
            Scheme::GlobalQuantum { layers } => Some(layers.unwrap_or(n)),
            _ => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        !matches!(self, Scheme::GlobalQuantum { layers: Some(0) })
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classical" => Ok(Scheme::Classical),
            "local" | "local-quantum" => Ok(Scheme::LocalQuantum),
            "global" | "global-quantum" => Ok(Scheme::global()),
            other => Err(format!(
                "unknown scheme `{other}` (expected classical, local or global)"
            )),
        }
    }
}

/// The six local single-qubit states, in the order |0⟩, |1⟩, |+⟩, |−⟩, |↑⟩, |↓⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalState {
    Zero,
    One,
    Plus,
    Minus,
    Up,
    Down,
}

impl LocalState {
    pub const ALL: [LocalState; 6] = [
        LocalState::Zero,
        LocalState::One,
        LocalState::Plus,
        LocalState::Minus,
        LocalState::Up,
        LocalState::Down,
    ];

    /// Gates preparing this state from |0⟩, in application order.
    pub fn prep_gates(self) -> &'static [GateKind] {
        use GateKind::*;
        match self {
            LocalState::Zero => &[],
            LocalState::One => &[X],
            LocalState::Plus => &[H],
            LocalState::Minus => &[X, H],
            LocalState::Up => &[H, S],
            LocalState::Down => &[X, H, S],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            LocalState::Zero => "0",
            LocalState::One => "1",
            LocalState::Plus => "+",
            LocalState::Minus => "-",
            LocalState::Up => "up",
            LocalState::Down => "down",
        }
    }
}

/// Single-qubit Clifford words drawn per qubit in each global layer, in
/// application order.
pub const CLIFFORD_WORDS: [&[GateKind]; 6] = [
    &[],
    &[GateKind::H],
    &[GateKind::S],
    &[GateKind::H, GateKind::S],
    &[GateKind::S, GateKind::H],
    &[GateKind::H, GateKind::S, GateKind::H],
];

#[derive(Clone, Debug, PartialEq)]
pub struct Stimulus {
    pub prep: Circuit,
    pub scheme: Scheme,
    pub tag: DrawTag,
}

impl Stimulus {
    pub fn num_qubits(&self) -> usize {
        self.prep.num_qubits()
    }

    /// The prepared state, simulated from |0…0⟩.
    pub fn state(&self) -> Result<StateVector, SimError> {
        let mut s = StateVector::zero(self.num_qubits())?;
        s.run(&self.prep)?;
        Ok(s)
    }
}

/// Uniformly random computational basis state: X on every qubit whose bit is 1.
pub fn gen_classical(n: usize, rng: &mut RandomSource) -> Stimulus {
    let tag = rng.next_tag();
    let mut prep = Circuit::named(n, "classical-stimulus");
    for q in 0..n {
        if rng.gen::<bool>() {
            prep.push(Gate::single(GateKind::X, q));
        }
    }
    Stimulus {
        prep,
        scheme: Scheme::Classical,
        tag,
    }
}

/// Preparation circuit for a product state; `states[k]` goes on qubit k.
pub fn local_prep(states: &[LocalState]) -> Circuit {
    let mut prep = Circuit::named(states.len(), "local-stimulus");
    for (q, s) in states.iter().enumerate() {
        for &k in s.prep_gates() {
            prep.push(Gate::single(k, q));
        }
    }
    prep
}

/// Draws the local states for `n` qubits, independently and uniformly.
pub fn draw_local_states(n: usize, rng: &mut RandomSource) -> Vec<LocalState> {
    (0..n)
        .map(|_| LocalState::ALL[rng.gen_range(0..LocalState::ALL.len())])
        .collect()
}

pub fn gen_local(n: usize, rng: &mut RandomSource) -> Stimulus {
    let tag = rng.next_tag();
    let states = draw_local_states(n, rng);
    Stimulus {
        prep: local_prep(&states),
        scheme: Scheme::LocalQuantum,
        tag,
    }
}

/// Matching rounds per global layer.
pub const ROUNDS_PER_LAYER: usize = 2;

/// Appends one random Clifford layer. A layer is [`ROUNDS_PER_LAYER`]
/// rounds; each round draws a word from [`CLIFFORD_WORDS`] for every qubit,
/// then pairs the qubits by a uniformly random matching and puts a CNOT of
/// random orientation on every pair.
pub fn push_clifford_layer(prep: &mut Circuit, rng: &mut RandomSource) {
    let n = prep.num_qubits();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..ROUNDS_PER_LAYER {
        for q in 0..n {
            let word = CLIFFORD_WORDS[rng.gen_range(0..CLIFFORD_WORDS.len())];
            for &k in word {
                prep.push(Gate::single(k, q));
            }
        }
        order.shuffle(rng);
        for pair in order.chunks_exact(2) {
            let (c, t) = if rng.gen::<bool>() {
                (pair[1], pair[0])
            } else {
                (pair[0], pair[1])
            };
            prep.push(Gate::cnot(c, t));
        }
    }
}

pub fn gen_global(n: usize, layers: usize, rng: &mut RandomSource) -> Stimulus {
    assert!(layers >= 1, "global stimuli need at least one layer");
    let tag = rng.next_tag();
    let mut prep = Circuit::named(n, "global-stimulus");
    for _ in 0..layers {
        push_clifford_layer(&mut prep, rng);
    }
    Stimulus {
        prep,
        scheme: Scheme::global_with_layers(layers),
        tag,
    }
}

/// Draws the next stimulus of `scheme`.
pub fn next_stimulus(scheme: Scheme, n: usize, rng: &mut RandomSource) -> Stimulus {
    match scheme {
        Scheme::Classical => gen_classical(n, rng),
        Scheme::LocalQuantum => gen_local(n, rng),
        Scheme::GlobalQuantum { .. } => {
            let layers = scheme.layers_for(n).unwrap_or(n);
            let mut s = gen_global(n, layers, rng);
            s.scheme = scheme;
            s
        }
    }
}

/// All 6^n local product states in a fixed order (qubit 0 varies fastest).
pub fn enumerate_local(n: usize) -> impl Iterator<Item = Vec<LocalState>> {
    let total = 6usize.pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let s = LocalState::ALL[idx % 6];
                idx /= 6;
                s
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::sim::fidelity;
    use num_complex::Complex64;
    use std::collections::HashSet;

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn classical_prep_is_x_gates_on_set_bits() {
        let mut rng = RandomSource::new(11);
        for _ in 0..50 {
            let s = gen_classical(5, &mut rng);
            assert!(s
                .prep
                .gates()
                .iter()
                .all(|g| g.kind == GateKind::X && g.controls.is_empty()));
            let state = s.state().unwrap();
            let idx: usize = s.prep.gates().iter().map(|g| 1 << g.target).sum();
            assert_eq!(state, StateVector::basis(5, idx).unwrap());
        }
    }

    #[test]
    fn classical_eleven() {
        let mut prep = Circuit::new(2);
        prep.push(Gate::single(GateKind::X, 0))
            .push(Gate::single(GateKind::X, 1));
        let stim = Stimulus {
            prep,
            scheme: Scheme::Classical,
            tag: RandomSource::new(0).next_tag(),
        };
        assert_eq!(stim.state().unwrap(), StateVector::basis(2, 3).unwrap());
    }

    #[test]
    fn classical_single_qubit_zero_draw() {
        // find a seed whose first bit is 0 and check the empty prep
        let seed = (0..64)
            .find(|&s| !RandomSource::new(s).gen::<bool>())
            .unwrap();
        let stim = gen_classical(1, &mut RandomSource::new(seed));
        assert!(stim.prep.is_empty());
        assert_eq!(stim.state().unwrap(), StateVector::zero(1).unwrap());
    }

    #[test]
    fn classical_is_uniform_chi_square() {
        let mut rng = RandomSource::new(2024);
        let mut counts = [0usize; 16];
        let draws = 10_000;
        for _ in 0..draws {
            let s = gen_classical(4, &mut rng);
            let idx: usize = s.prep.gates().iter().map(|g| 1 << g.target).sum();
            counts[idx] += 1;
        }
        let expect = draws as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        // 15 degrees of freedom, 0.999 quantile ≈ 37.7
        assert!(chi2 < 37.7, "chi2 = {chi2}, counts = {counts:?}");
        let sigma = (draws as f64 * (1.0 / 16.0) * (15.0 / 16.0)).sqrt();
        for c in counts {
            assert!((c as f64 - expect).abs() <= 3.0 * sigma + 1.0, "{counts:?}");
        }
    }

    #[test]
    fn local_prep_matches_oracle_vectors() {
        let vecs = oracle::local_basis_vectors();
        for (i, s) in LocalState::ALL.iter().enumerate() {
            let state = StateVector::zero(1)
                .and_then(|mut v| v.run(&local_prep(&[*s])).map(|_| v))
                .unwrap();
            assert!(
                close(state.amplitudes(), &vecs[i], 1e-12),
                "{s:?}: {state:?}"
            );
        }
    }

    #[test]
    fn local_three_qubit_example() {
        // |0⟩ ⊗ |+⟩ ⊗ |↑⟩ with q2 = |0⟩, q1 = |+⟩, q0 = |↑⟩
        let prep = local_prep(&[LocalState::Up, LocalState::Plus, LocalState::Zero]);
        let kinds: Vec<(GateKind, usize)> =
            prep.gates().iter().map(|g| (g.kind, g.target)).collect();
        assert_eq!(
            kinds,
            vec![(GateKind::H, 0), (GateKind::S, 0), (GateKind::H, 1)]
        );
        let mut state = StateVector::zero(3).unwrap();
        state.run(&prep).unwrap();
        let want = oracle::local_product_state(&[4, 2, 0]);
        assert!(close(state.amplitudes(), &want, 1e-12));
    }

    #[test]
    fn local_single_one() {
        let prep = local_prep(&[LocalState::One]);
        let mut s = StateVector::zero(1).unwrap();
        s.run(&prep).unwrap();
        assert_eq!(s, StateVector::basis(1, 1).unwrap());
    }

    #[test]
    fn local_support_is_covered() {
        for n in 1..=2 {
            let mut rng = RandomSource::new(99);
            let mut seen = HashSet::new();
            for _ in 0..5000 {
                seen.insert(draw_local_states(n, &mut rng));
            }
            assert_eq!(seen.len(), 6usize.pow(n as u32));
        }
    }

    #[test]
    fn local_frequencies_are_uniform() {
        let mut rng = RandomSource::new(5);
        let mut counts = [0usize; 6];
        for _ in 0..12_000 {
            let s = draw_local_states(1, &mut rng)[0];
            counts[LocalState::ALL.iter().position(|&x| x == s).unwrap()] += 1;
        }
        let sigma = (12_000.0f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for c in counts {
            assert!((c as f64 - 2000.0).abs() < 4.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn global_single_qubit_has_no_cnot() {
        let mut rng = RandomSource::new(1);
        for _ in 0..100 {
            let s = gen_global(1, 3, &mut rng);
            assert!(s.prep.gates().iter().all(|g| g.controls.is_empty()));
            assert!(s.prep.gate_count() <= 3 * 3 * ROUNDS_PER_LAYER);
        }
    }

    #[test]
    fn global_gate_set_and_counts() {
        let mut rng = RandomSource::new(3);
        for _ in 0..500 {
            let s = next_stimulus(Scheme::global_with_layers(2), 2, &mut rng);
            assert!(s.prep.gates().iter().all(|g| match g.kind {
                GateKind::H | GateKind::S => g.controls.is_empty(),
                GateKind::X => g.controls.len() == 1,
                _ => false,
            }));
            // per round: zero to three gates per qubit and exactly one CNOT
            let cnots = s
                .prep
                .gates()
                .iter()
                .filter(|g| !g.controls.is_empty())
                .count();
            assert_eq!(cnots, 2 * ROUNDS_PER_LAYER);
            let count = s.prep.gate_count();
            assert!((cnots..=cnots + 2 * 3 * 2 * ROUNDS_PER_LAYER).contains(&count));
        }
    }

    #[test]
    fn bell_state_as_one_layer() {
        let mut prep = Circuit::new(2);
        prep.push(Gate::single(GateKind::H, 1))
            .push(Gate::cnot(1, 0));
        let mut s = StateVector::zero(2).unwrap();
        s.run(&prep).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let want = [r, 0.0, 0.0, r].map(|x| Complex64::new(x, 0.0));
        assert!(close(s.amplitudes(), &want, 1e-12));
    }

    #[test]
    fn global_states_are_stabilizer_states() {
        let mut rng = RandomSource::new(8);
        for n in 1..=4 {
            for _ in 0..100 {
                let s = next_stimulus(Scheme::global(), n, &mut rng);
                let state = s.state().unwrap();
                let mags: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
                let nonzero: Vec<f64> = mags.iter().copied().filter(|&m| m > 1e-12).collect();
                let k = (nonzero.len() as f64).log2().round() as i32;
                assert_eq!(1usize << k, nonzero.len());
                let want = 2f64.powi(-k);
                assert!(nonzero.iter().all(|m| (m - want).abs() < 1e-10), "{mags:?}");
            }
        }
    }

    #[test]
    fn first_layer_reaches_all_axes() {
        // up to phase, single-qubit words applied to |0⟩ reach |0⟩, |+⟩, |↑⟩ and |↓⟩
        let vecs = oracle::local_basis_vectors();
        let mut reached = HashSet::new();
        for word in CLIFFORD_WORDS {
            let mut c = Circuit::new(1);
            for &k in word {
                c.push(Gate::single(k, 0));
            }
            let mut s = StateVector::zero(1).unwrap();
            s.run(&c).unwrap();
            for (i, v) in vecs.iter().enumerate() {
                let target = StateVector::from_amplitudes(v.to_vec()).unwrap();
                if (fidelity(&s, &target).unwrap() - 1.0).abs() < 1e-12 {
                    reached.insert(i);
                }
            }
        }
        assert_eq!(reached, HashSet::from([0, 2, 4, 5]));
    }

    #[test]
    fn default_layers_follow_register_size() {
        assert_eq!(Scheme::global().layers_for(7), Some(7));
        assert_eq!(Scheme::global_with_layers(3).layers_for(7), Some(3));
        assert_eq!(Scheme::Classical.layers_for(7), None);
        assert!(!Scheme::global_with_layers(0).is_valid());
    }

    #[test]
    fn dispatch() {
        let mut rng = RandomSource::new(17);
        let c = next_stimulus(Scheme::Classical, 2, &mut rng);
        let nonzero = c
            .state()
            .unwrap()
            .amplitudes()
            .iter()
            .filter(|a| a.norm() > 1e-12)
            .count();
        assert_eq!(nonzero, 1);
        let l = next_stimulus(Scheme::LocalQuantum, 2, &mut rng);
        assert_eq!(l.scheme, Scheme::LocalQuantum);
        // product state: amplitude matrix a[q1][q0] has rank one
        let a = l.state().unwrap().into_amplitudes();
        assert!((a[0] * a[3] - a[1] * a[2]).norm() < 1e-12);
    }

    #[test]
    fn determinism() {
        for scheme in [Scheme::Classical, Scheme::LocalQuantum, Scheme::global()] {
            let mut a = RandomSource::new(42);
            let mut b = RandomSource::new(42);
            for _ in 0..20 {
                assert_eq!(
                    next_stimulus(scheme, 5, &mut a),
                    next_stimulus(scheme, 5, &mut b)
                );
            }
        }
    }

    #[test]
    fn generated_states_have_unit_norm() {
        let mut rng = RandomSource::new(0);
        for scheme in [Scheme::Classical, Scheme::LocalQuantum, Scheme::global()] {
            for n in 1..=6 {
                let s = next_stimulus(scheme, n, &mut rng).state().unwrap();
                assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn enumeration_is_complete_and_distinct() {
        let all: Vec<_> = enumerate_local(2).collect();
        assert_eq!(all.len(), 36);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 36);
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("classical".parse::<Scheme>().unwrap(), Scheme::Classical);
        assert_eq!("LOCAL".parse::<Scheme>().unwrap(), Scheme::LocalQuantum);
        assert_eq!("global".parse::<Scheme>().unwrap(), Scheme::global());
        assert!("haar".parse::<Scheme>().is_err());
    }
}
