//! Error-injection benchmark: mutate each circuit, verify every mutation
//! under every scheme, and aggregate detection rate, stimuli used and
//! runtime into table rows.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::equivalence::{verify, VerificationConfig};
use crate::harness::config::BenchmarkConfig;
use crate::harness::{load_circuit, HarnessError};
use crate::mutator::{is_functional_mutation, mutate, ErrorOption};
use crate::rng::{derive_seed, RandomSource};
use crate::stimuli::Scheme;

pub const CSV_HEADER: [&str; 13] = [
    "circuit",
    "n",
    "scheme",
    "error_option",
    "p_s",
    "p_s_std",
    "avg_stimuli",
    "avg_stimuli_std",
    "avg_time",
    "avg_time_std",
    "total",
    "skipped",
    "equiv_filtered",
];

/// Label of the unmutated control rows.
pub const CONTROL_LABEL: &str = "none";

/// What happened to one (circuit, mutation, scheme, stimuli seed) instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome {
    /// The mutation could not be applied (e.g. Toffolis on two qubits).
    Skipped,
    Verified {
        detected: bool,
        stimuli_used: usize,
        seconds: f64,
        /// The oracle proved the mutation functionally equivalent.
        equivalent: bool,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecord {
    pub circuit: usize,
    pub scheme: usize,
    /// Index into the configured error options; `None` for control runs.
    pub option: Option<usize>,
    pub error_seed: usize,
    pub stimuli_seed: usize,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRow {
    pub circuit: String,
    pub n: usize,
    pub scheme: String,
    pub error_option: String,
    /// Percent detected among verified, non-equivalent instances.
    pub p_s: Option<f64>,
    /// Percent detected among all verified instances.
    pub p_s_unfiltered: Option<f64>,
    /// Standard deviation of `p_s` across stimuli-seed replicates.
    pub p_s_std: Option<f64>,
    /// Mean stimuli used by detected instances.
    pub avg_stimuli: Option<f64>,
    pub avg_stimuli_std: Option<f64>,
    /// Mean wall-clock seconds per verification.
    pub avg_time: Option<f64>,
    pub avg_time_std: Option<f64>,
    pub total: usize,
    pub skipped: usize,
    pub equiv_filtered: usize,
    pub detected: usize,
    pub undetected: usize,
}

impl BenchmarkRow {
    fn csv_fields(&self) -> [String; 13] {
        let f = |v: Option<f64>, digits: usize| match v {
            Some(x) => format!("{x:.digits$}"),
            None => String::new(),
        };
        [
            self.circuit.clone(),
            self.n.to_string(),
            self.scheme.clone(),
            self.error_option.clone(),
            f(self.p_s, 4),
            f(self.p_s_std, 4),
            f(self.avg_stimuli, 4),
            f(self.avg_stimuli_std, 4),
            f(self.avg_time, 6),
            f(self.avg_time_std, 6),
            self.total.to_string(),
            self.skipped.to_string(),
            self.equiv_filtered.to_string(),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkResult {
    pub circuits: Vec<Circuit>,
    pub schemes: Vec<Scheme>,
    pub error_options: Vec<ErrorOption>,
    /// Every instance, ordered by (circuit, option, error seed, scheme, stimuli seed).
    pub records: Vec<InstanceRecord>,
    /// One row per (circuit, scheme, option).
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkResult {
    /// Number of `verify` calls made.
    pub fn verifications(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r.outcome, Outcome::Verified { .. }))
            .count()
    }

    /// Rows pooled across circuits, one per (scheme, option).
    pub fn rows_by_scheme_and_option(&self) -> Vec<BenchmarkRow> {
        self.aggregate(|r| (r.scheme, r.option), |_| "all".to_string())
    }

    /// Rows pooled across circuits and options, one per scheme.
    pub fn rows_by_scheme(&self) -> Vec<BenchmarkRow> {
        self.aggregate(|r| (r.scheme, None), |_| "all".to_string())
            .into_iter()
            .map(|mut row| {
                row.error_option = "all".to_string();
                row
            })
            .collect()
    }

    fn rows_by_circuit(&self) -> Vec<BenchmarkRow> {
        let mut groups: BTreeMap<(usize, usize, Option<usize>), Vec<&InstanceRecord>> =
            BTreeMap::new();
        for r in &self.records {
            groups
                .entry((r.circuit, r.scheme, r.option))
                .or_default()
                .push(r);
        }
        groups
            .into_iter()
            .map(|((c, s, o), recs)| {
                let circuit = &self.circuits[c];
                summarize(
                    circuit.name.clone(),
                    circuit.num_qubits(),
                    self.schemes[s].label().to_string(),
                    self.option_label(o),
                    &recs,
                )
            })
            .collect()
    }

    fn aggregate(
        &self,
        key: impl Fn(&InstanceRecord) -> (usize, Option<usize>),
        name: impl Fn(usize) -> String,
    ) -> Vec<BenchmarkRow> {
        let mut groups: BTreeMap<(usize, Option<usize>), Vec<&InstanceRecord>> = BTreeMap::new();
        for r in &self.records {
            groups.entry(key(r)).or_default().push(r);
        }
        groups
            .into_iter()
            .map(|((s, o), recs)| {
                let n = recs
                    .iter()
                    .map(|r| self.circuits[r.circuit].num_qubits())
                    .max()
                    .unwrap_or(0);
                summarize(
                    name(s),
                    n,
                    self.schemes[s].label().to_string(),
                    self.option_label(o),
                    &recs,
                )
            })
            .collect()
    }

    fn option_label(&self, o: Option<usize>) -> String {
        match o {
            Some(i) => self.error_options[i].to_string(),
            None => CONTROL_LABEL.to_string(),
        }
    }
}

fn mean_std(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (Some(mean), Some(std))
}

fn summarize(
    circuit: String,
    n: usize,
    scheme: String,
    error_option: String,
    recs: &[&InstanceRecord],
) -> BenchmarkRow {
    let total = recs.len();
    let mut skipped = 0;
    let mut equiv_filtered = 0;
    let mut detected = 0;
    let mut detected_nonequiv = 0;
    let mut stimuli = Vec::new();
    let mut times = Vec::new();
    // stimuli seed -> (detected, counted) over non-equivalent instances
    let mut replicates: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for r in recs {
        match r.outcome {
            Outcome::Skipped => skipped += 1,
            Outcome::Verified {
                detected: d,
                stimuli_used,
                seconds,
                equivalent,
            } => {
                times.push(seconds);
                if d {
                    detected += 1;
                    stimuli.push(stimuli_used as f64);
                }
                if equivalent {
                    equiv_filtered += 1;
                } else {
                    let rep = replicates.entry(r.stimuli_seed).or_default();
                    rep.1 += 1;
                    if d {
                        detected_nonequiv += 1;
                        rep.0 += 1;
                    }
                }
            }
        }
    }
    let verified = total - skipped;
    let counted = verified - equiv_filtered;
    let pct = |a: usize, b: usize| (b > 0).then(|| 100.0 * a as f64 / b as f64);
    let rates: Vec<f64> = replicates
        .values()
        .filter(|(_, c)| *c > 0)
        .map(|&(d, c)| 100.0 * d as f64 / c as f64)
        .collect();
    let (_, p_s_std) = mean_std(&rates);
    let (avg_stimuli, avg_stimuli_std) = mean_std(&stimuli);
    let (avg_time, avg_time_std) = mean_std(&times);
    BenchmarkRow {
        circuit,
        n,
        scheme,
        error_option,
        p_s: pct(detected_nonequiv, counted),
        p_s_unfiltered: pct(detected, verified),
        p_s_std,
        avg_stimuli,
        avg_stimuli_std,
        avg_time,
        avg_time_std,
        total,
        skipped,
        equiv_filtered,
        detected,
        undetected: verified - detected,
    }
}

/// Loads the configured circuit files, runs the benchmark and writes the CSV
/// to the configured output path, if any.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkResult, HarnessError> {
    let circuits = config
        .circuit_paths
        .iter()
        .map(|p| load_circuit(p))
        .collect::<Result<Vec<_>, _>>()?;
    let result = run_benchmark_on(circuits, config)?;
    if let Some(path) = &config.output_path {
        write_csv_file(path, &result.rows)?;
    }
    Ok(result)
}

/// Runs the benchmark on in-memory circuits.
pub fn run_benchmark_on(
    circuits: Vec<Circuit>,
    config: &BenchmarkConfig,
) -> Result<BenchmarkResult, HarnessError> {
    config.validate()?;
    if circuits.is_empty() {
        return Err(HarnessError::Config("no circuits to benchmark".into()));
    }

    // One job per mutated circuit; every scheme and stimuli seed reuses it.
    let mut jobs: Vec<(usize, Option<usize>, usize)> = Vec::new();
    for ci in 0..circuits.len() {
        if config.control {
            jobs.push((ci, None, 0));
        }
        for oi in 0..config.error_options.len() {
            for e in 0..config.error_seeds {
                jobs.push((ci, Some(oi), e));
            }
        }
    }

    let per_job: Vec<Vec<InstanceRecord>> = jobs
        .par_iter()
        .map(|&(ci, oi, e)| run_job(&circuits, config, ci, oi, e))
        .collect::<Result<_, HarnessError>>()?;

    let mut result = BenchmarkResult {
        circuits,
        schemes: config.schemes.clone(),
        error_options: config.error_options.clone(),
        records: per_job.into_iter().flatten().collect(),
        rows: Vec::new(),
    };
    result.rows = result.rows_by_circuit();
    Ok(result)
}

fn run_job(
    circuits: &[Circuit],
    config: &BenchmarkConfig,
    ci: usize,
    oi: Option<usize>,
    e: usize,
) -> Result<Vec<InstanceRecord>, HarnessError> {
    let spec = &circuits[ci];
    // control runs use option slot u64::MAX so they never share a seed path
    let option_path = oi.map_or(u64::MAX, |o| o as u64);
    let mutated = match oi {
        None => Ok(spec.clone()),
        Some(o) => {
            let mut rng = RandomSource::new(derive_seed(
                config.master_seed,
                &[ci as u64, option_path, e as u64],
            ));
            mutate(spec, config.error_options[o], &mut rng)
        }
    };
    let equivalent = match &mutated {
        Ok(m) => is_functional_mutation(spec, m) == Some(false),
        Err(_) => false,
    };
    let mut out = Vec::with_capacity(config.schemes.len() * config.stimuli_seeds);
    for (si, &scheme) in config.schemes.iter().enumerate() {
        for s in 0..config.stimuli_seeds {
            let outcome = match &mutated {
                Err(_) => Outcome::Skipped,
                Ok(imp) => {
                    let seed = derive_seed(
                        config.master_seed,
                        &[ci as u64, option_path, e as u64, s as u64],
                    );
                    let vc = VerificationConfig::new(scheme, seed)
                        .with_max_stimuli(config.max_stimuli)
                        .with_epsilon(config.epsilon);
                    let report = verify(spec, imp, &vc)?;
                    Outcome::Verified {
                        detected: report.detected(),
                        stimuli_used: report.stimuli_used,
                        seconds: report.elapsed_secs(),
                        equivalent,
                    }
                }
            };
            out.push(InstanceRecord {
                circuit: ci,
                scheme: si,
                option: oi,
                error_seed: e,
                stimuli_seed: s,
                outcome,
            });
        }
    }
    Ok(out)
}

/// Writes rows under the fixed header.
pub fn write_csv<W: Write>(writer: W, rows: &[BenchmarkRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[BenchmarkRow]) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(std::io::BufWriter::new(file), rows)?;
    Ok(())
}

pub fn csv_string(rows: &[BenchmarkRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Renders rows as an aligned text table.
pub fn text_table(rows: &[BenchmarkRow]) -> String {
    let cells: Vec<[String; 13]> = rows.iter().map(BenchmarkRow::csv_fields).collect();
    let mut widths = CSV_HEADER.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |fields: &[&str]| {
        let parts: Vec<String> = fields
            .iter()
            .zip(widths)
            .map(|(f, w)| format!("{f:>w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&CSV_HEADER);
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&refs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};

    fn small() -> Circuit {
        let mut c = Circuit::named(3, "small");
        c.push(Gate::single(GateKind::H, 0))
            .push(Gate::cnot(0, 1))
            .push(Gate::single(GateKind::T, 2))
            .push(Gate::cnot(1, 2));
        c
    }

    fn config() -> BenchmarkConfig {
        BenchmarkConfig {
            error_seeds: 2,
            stimuli_seeds: 2,
            ..BenchmarkConfig::default()
        }
    }

    #[test]
    fn single_instance_single_row() {
        let cfg = BenchmarkConfig {
            schemes: vec![Scheme::Classical],
            error_options: vec![ErrorOption::InsertGates(1)],
            error_seeds: 1,
            stimuli_seeds: 1,
            ..BenchmarkConfig::default()
        };
        let r = run_benchmark_on(vec![small()], &cfg).unwrap();
        assert_eq!(r.verifications(), 1);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].total, 1);
    }

    #[test]
    fn control_rows_detect_nothing() {
        let cfg = BenchmarkConfig {
            error_options: vec![],
            control: true,
            ..config()
        };
        let r = run_benchmark_on(vec![small()], &cfg).unwrap();
        assert_eq!(r.rows.len(), 3);
        for row in &r.rows {
            assert_eq!(row.error_option, CONTROL_LABEL);
            assert_eq!(row.p_s, None, "control instances are all equivalent");
            assert_eq!(row.p_s_unfiltered, Some(0.0));
            assert_eq!(row.avg_stimuli, None);
        }
    }

    #[test]
    fn row_arithmetic() {
        let two = Circuit::from_gates(2, vec![Gate::cnot(0, 1)])
            .unwrap()
            .with_name("two");
        let r = run_benchmark_on(vec![small(), two], &config()).unwrap();
        assert_eq!(r.rows.len(), 2 * 3 * 8);
        for row in &r.rows {
            assert_eq!(row.detected + row.undetected + row.skipped, row.total);
            assert_eq!(row.total, 4);
            if let Some(p) = row.p_s {
                assert!((0.0..=100.0).contains(&p));
            }
            if let Some(s) = row.avg_stimuli {
                assert!((1.0..=16.0).contains(&s));
            }
        }
        // Toffolis need three qubits; removing three of one gate is impossible
        let skipped: Vec<_> = r.rows.iter().filter(|r| r.skipped > 0).collect();
        assert!(skipped
            .iter()
            .all(|r| r.circuit == "two" && r.skipped == r.total));
        assert_eq!(skipped.len(), 3 * 4);
    }

    #[test]
    fn deterministic_except_time() {
        let strip = |rows: &[BenchmarkRow]| -> Vec<BenchmarkRow> {
            rows.iter()
                .map(|r| BenchmarkRow {
                    avg_time: None,
                    avg_time_std: None,
                    ..r.clone()
                })
                .collect()
        };
        let a = run_benchmark_on(vec![small()], &config()).unwrap();
        let b = run_benchmark_on(vec![small()], &config()).unwrap();
        assert_eq!(strip(&a.rows), strip(&b.rows));
        let c = run_benchmark_on(
            vec![small()],
            &BenchmarkConfig {
                master_seed: 1,
                ..config()
            },
        )
        .unwrap();
        let differs = a
            .records
            .iter()
            .zip(&c.records)
            .any(|(x, y)| match (x.outcome, y.outcome) {
                (
                    Outcome::Verified {
                        stimuli_used: p, ..
                    },
                    Outcome::Verified {
                        stimuli_used: q, ..
                    },
                ) => p != q,
                _ => false,
            });
        assert!(differs);
    }

    #[test]
    fn csv_layout() {
        let r = run_benchmark_on(vec![small()], &config()).unwrap();
        let text = csv_string(&r.rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "circuit,n,scheme,error_option,p_s,p_s_std,avg_stimuli,avg_stimuli_std,avg_time,avg_time_std,total,skipped,equiv_filtered"
        );
        assert_eq!(lines.count(), r.rows.len());
        assert!(text_table(&r.rows).starts_with("circuit"));
    }

    #[test]
    fn pooled_rows() {
        let r = run_benchmark_on(vec![small(), small().with_name("again")], &config()).unwrap();
        let pooled = r.rows_by_scheme_and_option();
        assert_eq!(pooled.len(), 3 * 8);
        assert!(pooled.iter().all(|p| p.total == 8 && p.circuit == "all"));
        let per_scheme = r.rows_by_scheme();
        assert_eq!(per_scheme.len(), 3);
        assert!(per_scheme.iter().all(|p| p.total == 64));
    }

    #[test]
    fn equivalent_mutations_are_filtered() {
        // removing both gates of H·H leaves the identity
        let hh = Circuit::from_gates(
            3,
            vec![Gate::single(GateKind::H, 0), Gate::single(GateKind::H, 0)],
        )
        .unwrap()
        .with_name("hh");
        let cfg = BenchmarkConfig {
            error_options: vec![ErrorOption::RemoveGates(2)],
            ..config()
        };
        let r = run_benchmark_on(vec![hh], &cfg).unwrap();
        for row in &r.rows {
            assert_eq!(row.equiv_filtered, row.total);
            assert_eq!(row.p_s, None);
            assert_eq!(row.p_s_unfiltered, Some(0.0));
        }
    }
}
