//! The simulative verification loop.
//!
//! Draw a stimulus, simulate specification and realization from it, compare
//! the outputs by fidelity, and stop at the first discrepancy or when the
//! stimulus budget runs out.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use crate::circuit::Circuit;
use crate::error::VerifyError;
use crate::rng::{DrawTag, RandomSource};
use crate::sim::{fidelity, StateVector};
use crate::stimuli::{self, LocalState, Scheme, Stimulus};

pub const DEFAULT_MAX_STIMULI: usize = 16;
pub const DEFAULT_EPSILON: f64 = 1e-8;
/// Largest register accepted by [`verify_exhaustive_local`] (6^8 stimuli).
pub const EXHAUSTIVE_MAX_QUBITS: usize = 8;

/// Registers at least this wide simulate the two circuits on separate threads.
const PARALLEL_PAIR_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerificationConfig {
    pub scheme: Scheme,
    pub max_stimuli: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl VerificationConfig {
    pub fn new(scheme: Scheme, seed: u64) -> Self {
        VerificationConfig {
            scheme,
            max_stimuli: DEFAULT_MAX_STIMULI,
            epsilon: DEFAULT_EPSILON,
            seed,
        }
    }

    pub fn with_max_stimuli(mut self, max_stimuli: usize) -> Self {
        self.max_stimuli = max_stimuli;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    fn validate(&self) -> Result<(), VerifyError> {
        check_epsilon(self.epsilon)?;
        if self.max_stimuli == 0 {
            return Err(VerifyError::EmptyBudget);
        }
        Ok(())
    }
}

impl Default for VerificationConfig {
    fn default() -> Self {
        VerificationConfig::new(Scheme::global(), 0)
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), VerifyError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(VerifyError::BadEpsilon(epsilon));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Some stimulus produced outputs with 1 − F > ε.
    ErrorDetected,
    /// Every stimulus in the budget agreed.
    BudgetExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ErrorDetected => "error-detected",
            Verdict::BudgetExhausted => "budget-exhausted",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub stimuli_used: usize,
    pub fidelities: Vec<f64>,
    /// The detecting stimulus, when an error was found.
    pub witness: Option<Stimulus>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn detected(&self) -> bool {
        self.verdict == Verdict::ErrorDetected
    }

    pub fn min_fidelity(&self) -> Option<f64> {
        self.fidelities.iter().copied().reduce(f64::min)
    }

    pub fn elapsed_secs(&self) -> f64 {
        self.elapsed.as_secs_f64()
    }

    /// Column names matching [`VerificationReport::csv_row`].
    pub const CSV_HEADER: &'static str = "verdict,stimuli_used,min_fidelity,elapsed_s";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6}",
            self.verdict,
            self.stimuli_used,
            self.min_fidelity()
                .map_or_else(String::new, |f| format!("{f:.12}")),
            self.elapsed_secs()
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict:      {}", self.verdict);
        let _ = writeln!(out, "stimuli used: {}", self.stimuli_used);
        if let Some(f) = self.min_fidelity() {
            let _ = writeln!(out, "min fidelity: {f:.12}");
        }
        let fids: Vec<String> = self.fidelities.iter().map(|f| format!("{f:.6}")).collect();
        let _ = writeln!(out, "fidelities:   [{}]", fids.join(", "));
        if let Some(w) = &self.witness {
            let _ = writeln!(
                out,
                "witness:      {} stimulus #{} (seed {}, {} prep gates)",
                w.scheme,
                w.tag.index,
                w.tag.seed,
                w.prep.gate_count()
            );
        }
        let _ = writeln!(out, "elapsed:      {:.6} s", self.elapsed_secs());
        out
    }
}

fn check_sizes(spec: &Circuit, imp: &Circuit) -> Result<(), VerifyError> {
    if spec.num_qubits() != imp.num_qubits() {
        return Err(VerifyError::QubitCountMismatch {
            spec: spec.num_qubits(),
            imp: imp.num_qubits(),
        });
    }
    Ok(())
}

/// F(U|φ⟩, G|φ⟩) for the state prepared by `prep`. Each circuit runs on its
/// own copy of the prepared state.
pub fn stimulus_fidelity(
    spec: &Circuit,
    imp: &Circuit,
    prep: &Circuit,
) -> Result<f64, VerifyError> {
    let n = spec.num_qubits();
    let run = |c: &Circuit| -> Result<StateVector, VerifyError> {
        let mut s = StateVector::zero(n)?;
        s.run(prep)?;
        s.run(c)?;
        Ok(s)
    };
    let (a, b) = if n >= PARALLEL_PAIR_QUBITS {
        rayon::join(|| run(spec), || run(imp))
    } else {
        (run(spec), run(imp))
    };
    Ok(fidelity(&a?, &b?)?)
}

/// Runs the verification loop with randomly drawn stimuli.
pub fn verify(
    spec: &Circuit,
    imp: &Circuit,
    config: &VerificationConfig,
) -> Result<VerificationReport, VerifyError> {
    check_sizes(spec, imp)?;
    config.validate()?;
    let n = spec.num_qubits();
    let start = Instant::now();
    let mut rng = RandomSource::new(config.seed);
    let mut fidelities = Vec::with_capacity(config.max_stimuli);
    let mut witness = None;
    for _ in 0..config.max_stimuli {
        let stim = stimuli::next_stimulus(config.scheme, n, &mut rng);
        let f = stimulus_fidelity(spec, imp, &stim.prep)?;
        fidelities.push(f);
        if 1.0 - f > config.epsilon {
            witness = Some(stim);
            break;
        }
    }
    Ok(finish(fidelities, witness, start))
}

fn finish(fidelities: Vec<f64>, witness: Option<Stimulus>, start: Instant) -> VerificationReport {
    VerificationReport {
        verdict: if witness.is_some() {
            Verdict::ErrorDetected
        } else {
            Verdict::BudgetExhausted
        },
        stimuli_used: fidelities.len(),
        fidelities,
        witness,
        elapsed: start.elapsed(),
    }
}

/// Runs the verification loop over all 6^n local stimuli, each exactly once.
pub fn verify_exhaustive_local(
    spec: &Circuit,
    imp: &Circuit,
    epsilon: f64,
) -> Result<VerificationReport, VerifyError> {
    verify_exhaustive_local_with_limit(spec, imp, epsilon, EXHAUSTIVE_MAX_QUBITS)
}

pub fn verify_exhaustive_local_with_limit(
    spec: &Circuit,
    imp: &Circuit,
    epsilon: f64,
    max_qubits: usize,
) -> Result<VerificationReport, VerifyError> {
    check_sizes(spec, imp)?;
    check_epsilon(epsilon)?;
    let n = spec.num_qubits();
    if n > max_qubits {
        return Err(VerifyError::ExhaustiveLimit {
            requested: n,
            max: max_qubits,
        });
    }
    let start = Instant::now();
    let mut fidelities = Vec::new();
    let mut witness = None;
    for (index, states) in stimuli::enumerate_local(n).enumerate() {
        let prep = stimuli::local_prep(&states);
        let f = stimulus_fidelity(spec, imp, &prep)?;
        fidelities.push(f);
        if 1.0 - f > epsilon {
            witness = Some(exhaustive_stimulus(prep, index));
            break;
        }
    }
    Ok(finish(fidelities, witness, start))
}

fn exhaustive_stimulus(prep: Circuit, index: usize) -> Stimulus {
    Stimulus {
        prep,
        scheme: Scheme::LocalQuantum,
        tag: DrawTag {
            seed: 0,
            stream: 0,
            index: index as u64,
        },
    }
}

/// Describes a local product state, most significant qubit first, e.g. `|0+up⟩`.
pub fn describe_local(states: &[LocalState]) -> String {
    let parts: Vec<&str> = states.iter().rev().map(|s| s.symbol()).collect();
    format!("|{}⟩", parts.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};

    fn base(n: usize) -> Circuit {
        let mut c = Circuit::new(n);
        c.push(Gate::single(GateKind::H, 0));
        for q in 1..n {
            c.push(Gate::cnot(q - 1, q));
        }
        c.push(Gate::single(GateKind::T, n - 1));
        c
    }

    /// V = U · E: the error acts on q0 before U.
    fn with_tail(c: &Circuit, kind: GateKind) -> Circuit {
        let mut out = Circuit::new(c.num_qubits());
        out.push(Gate::single(kind, 0));
        out.extend_from(c).unwrap();
        out
    }

    #[test]
    fn identical_circuits_exhaust_budget() {
        let u = base(4);
        for scheme in [Scheme::Classical, Scheme::LocalQuantum, Scheme::global()] {
            let r = verify(&u, &u, &VerificationConfig::new(scheme, 9)).unwrap();
            assert_eq!(r.verdict, Verdict::BudgetExhausted);
            assert_eq!(r.stimuli_used, DEFAULT_MAX_STIMULI);
            assert!(r.fidelities.iter().all(|f| 1.0 - f <= DEFAULT_EPSILON));
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn bit_flip_found_by_first_classical_stimulus() {
        let u = base(3);
        let r = verify(
            &u,
            &with_tail(&u, GateKind::X),
            &VerificationConfig::new(Scheme::Classical, 1),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ErrorDetected);
        assert_eq!(r.stimuli_used, 1);
        // orthogonal up to double rounding
        assert!(r.fidelities[0] < 1e-20, "{:?}", r.fidelities);
        assert!(r.witness.is_some());
    }

    #[test]
    fn phase_flip_invisible_to_classical_stimuli() {
        let u = base(3);
        let r = verify(
            &u,
            &with_tail(&u, GateKind::Z),
            &VerificationConfig::new(Scheme::Classical, 1),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::BudgetExhausted);
        assert!(r.fidelities.iter().all(|&f| (f - 1.0).abs() < 1e-10));
    }

    #[test]
    fn phase_flip_local_detection_rate() {
        let u = base(2);
        let v = with_tail(&u, GateKind::Z);
        let trials = 3000;
        let hits = (0..trials)
            .filter(|&seed| {
                verify(
                    &u,
                    &v,
                    &VerificationConfig::new(Scheme::LocalQuantum, seed).with_max_stimuli(1),
                )
                .unwrap()
                .detected()
            })
            .count();
        let rate = hits as f64 / trials as f64;
        assert!((rate - 2.0 / 3.0).abs() < 0.03, "rate {rate}");
    }

    #[test]
    fn structural_errors_come_first() {
        let r = verify(
            &Circuit::new(2),
            &Circuit::new(3),
            &VerificationConfig::default(),
        );
        assert!(matches!(
            r,
            Err(VerifyError::QubitCountMismatch { spec: 2, imp: 3 })
        ));
        let u = Circuit::new(1);
        assert!(matches!(
            verify(&u, &u, &VerificationConfig::default().with_epsilon(0.7)),
            Err(VerifyError::BadEpsilon(_))
        ));
        assert!(matches!(
            verify(&u, &u, &VerificationConfig::default().with_max_stimuli(0)),
            Err(VerifyError::EmptyBudget)
        ));
    }

    #[test]
    fn reproducible_reports() {
        let u = base(4);
        let v = with_tail(&u, GateKind::S);
        for scheme in [Scheme::Classical, Scheme::LocalQuantum, Scheme::global()] {
            let cfg = VerificationConfig::new(scheme, 77);
            let a = verify(&u, &v, &cfg).unwrap();
            let b = verify(&u, &v, &cfg).unwrap();
            assert_eq!(a.verdict, b.verdict);
            assert_eq!(a.fidelities, b.fidelities);
            assert_eq!(a.witness, b.witness);
        }
    }

    #[test]
    fn verdict_matches_last_fidelity() {
        let u = base(3);
        for kind in [GateKind::X, GateKind::Z, GateKind::T, GateKind::H] {
            for seed in 0..20 {
                let r = verify(
                    &u,
                    &with_tail(&u, kind),
                    &VerificationConfig::new(Scheme::LocalQuantum, seed),
                )
                .unwrap();
                let last = *r.fidelities.last().unwrap();
                assert_eq!(r.detected(), 1.0 - last > DEFAULT_EPSILON);
                assert_eq!(r.stimuli_used, r.fidelities.len());
                assert!(r.stimuli_used <= DEFAULT_MAX_STIMULI);
                // nothing after the first detection
                assert!(r.fidelities[..r.stimuli_used - 1]
                    .iter()
                    .all(|f| 1.0 - f <= DEFAULT_EPSILON));
            }
        }
    }

    #[test]
    fn exhaustive_equivalent_pair_uses_all_36() {
        let u = base(2);
        // HH inserted at the end is the identity
        let mut v = u.clone();
        v.push(Gate::single(GateKind::H, 1))
            .push(Gate::single(GateKind::H, 1));
        let r = verify_exhaustive_local(&u, &v, DEFAULT_EPSILON).unwrap();
        assert_eq!(r.verdict, Verdict::BudgetExhausted);
        assert_eq!(r.stimuli_used, 36);
    }

    #[test]
    fn exhaustive_single_qubit_phase_flip() {
        let id = Circuit::new(1);
        let mut z = Circuit::new(1);
        z.push(Gate::single(GateKind::Z, 0));
        let r = verify_exhaustive_local(&id, &z, DEFAULT_EPSILON).unwrap();
        assert!(r.detected());
        assert!(r.stimuli_used <= 6);
        // |0⟩ and |1⟩ come first and do not see Z; |+⟩ does
        assert_eq!(r.stimuli_used, 3);
    }

    #[test]
    fn exhaustive_detects_cnot() {
        let id = Circuit::new(2);
        let mut cx = Circuit::new(2);
        cx.push(Gate::cnot(0, 1));
        assert!(verify_exhaustive_local(&id, &cx, DEFAULT_EPSILON)
            .unwrap()
            .detected());
    }

    #[test]
    fn exhaustive_limit() {
        let c = Circuit::new(3);
        assert!(matches!(
            verify_exhaustive_local_with_limit(&c, &c, DEFAULT_EPSILON, 2),
            Err(VerifyError::ExhaustiveLimit {
                requested: 3,
                max: 2
            })
        ));
    }

    #[test]
    fn report_rendering() {
        let u = base(2);
        let r = verify(
            &u,
            &with_tail(&u, GateKind::X),
            &VerificationConfig::new(Scheme::Classical, 3),
        )
        .unwrap();
        let row = r.csv_row();
        assert!(row.starts_with("error-detected,1,0.000000000000,"), "{row}");
        assert_eq!(
            row.split(',').count(),
            VerificationReport::CSV_HEADER.split(',').count()
        );
        let text = r.to_text();
        assert!(text.contains("verdict:      error-detected"));
        assert!(text.contains("witness:"));
    }

    #[test]
    fn local_description() {
        let s = [LocalState::Up, LocalState::Plus, LocalState::Zero];
        assert_eq!(describe_local(&s), "|0 + up⟩");
    }
}
