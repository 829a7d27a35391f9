//! `qcheck`: command-line front end for simulative equivalence checking.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qcheck::equivalence::{verify_exhaustive_local, DEFAULT_EPSILON, DEFAULT_MAX_STIMULI};
use qcheck::harness::bench::{csv_string, text_table, write_csv_file};
use qcheck::harness::{corpus, load_circuit, run_benchmark_on, BenchmarkConfig};
use qcheck::{emit_qasm, mutate, oracle, verify, ErrorOption, RandomSource, Scheme};
use qcheck::{Verdict, VerificationConfig, VerificationReport};

/// Exit status for usage, I/O and parse errors.
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qcheck",
    version,
    about = "Simulative equivalence checking of quantum circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a realization against a specification. Exit status: 0 no
    /// discrepancy found, 1 error detected, 2 usage/IO/parse error.
    Verify(VerifyArgs),
    /// Run the error-injection benchmark and report table rows.
    Bench(BenchArgs),
    /// Inject an error into a circuit and print the result as OpenQASM.
    Mutate(MutateArgs),
    /// Write the bundled benchmark circuits as OpenQASM files.
    GenCircuits(GenArgs),
    /// Compare two small circuits exactly through their unitaries. Exit
    /// status: 0 equivalent up to global phase, 1 different, 2 error.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    spec: PathBuf,
    #[arg(value_name = "IMPL")]
    imp: PathBuf,
    #[arg(long, default_value = "global")]
    scheme: Scheme,
    /// Layers of random Cliffords per global stimulus (default: qubit count).
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_STIMULI)]
    max_stimuli: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Try all 6^n local stimuli instead of a random budget.
    #[arg(long, conflicts_with_all = ["scheme", "layers", "max_stimuli", "seed"])]
    exhaustive: bool,
    /// Write the detecting stimulus' preparation circuit here.
    #[arg(long, value_name = "PATH")]
    witness: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    /// Circuit files; see also --bundled.
    circuits: Vec<PathBuf>,
    /// Key-value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Benchmark the generated corpus (GHZ, QFT, random Clifford+T).
    #[arg(long)]
    bundled: bool,
    /// Register sizes for --bundled.
    #[arg(long, value_delimiter = ',', requires = "bundled")]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    scheme: Option<Vec<Scheme>>,
    #[arg(long, value_delimiter = ',')]
    options: Option<Vec<ErrorOption>>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    error_seeds: Option<usize>,
    #[arg(long)]
    stimuli_seeds: Option<usize>,
    #[arg(long)]
    max_stimuli: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also run each circuit against itself.
    #[arg(long)]
    control: bool,
    /// Pool rows across circuits, one per (scheme, option).
    #[arg(long)]
    pooled: bool,
    /// CSV output file (always CSV, regardless of --format).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct MutateArgs {
    input: PathBuf,
    #[arg(long)]
    option: ErrorOption,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = corpus::BUNDLED_SIZES)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    spec: PathBuf,
    #[arg(value_name = "IMPL")]
    imp: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Bench(a) => run_bench(a).map(|_| 0),
        Command::Mutate(a) => run_mutate(a).map(|_| 0),
        Command::GenCircuits(a) => run_gen(a).map(|_| 0),
        Command::OracleCheck(a) => run_oracle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_verify(a: VerifyArgs) -> Result<u8> {
    let spec = load_circuit(&a.spec)?;
    let imp = load_circuit(&a.imp)?;
    let report = if a.exhaustive {
        verify_exhaustive_local(&spec, &imp, a.epsilon)?
    } else {
        let scheme = match (a.scheme, a.layers) {
            (Scheme::GlobalQuantum { .. }, Some(l)) => Scheme::global_with_layers(l),
            (_, Some(_)) => bail!("--layers only applies to the global scheme"),
            (s, None) => s,
        };
        let config = VerificationConfig::new(scheme, a.seed)
            .with_max_stimuli(a.max_stimuli)
            .with_epsilon(a.epsilon);
        verify(&spec, &imp, &config)?
    };
    print_report(&report, a.format);
    if let (Some(path), Some(w)) = (&a.witness, &report.witness) {
        write_or_print(Some(path), &emit_qasm(&w.prep)?)?;
    }
    Ok(match report.verdict {
        Verdict::BudgetExhausted => 0,
        Verdict::ErrorDetected => 1,
    })
}

fn print_report(report: &VerificationReport, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Csv => println!("{}\n{}", VerificationReport::CSV_HEADER, report.csv_row()),
    }
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => BenchmarkConfig::from_file(p)?,
        None => BenchmarkConfig::default(),
    };
    if !a.circuits.is_empty() {
        cfg.circuit_paths = a.circuits.clone();
    }
    if let Some(s) = a.scheme {
        cfg.schemes = s;
    }
    if let Some(o) = a.options {
        cfg.error_options = o;
    }
    if let Some(l) = a.layers {
        cfg.set_layers(l);
    }
    cfg.error_seeds = a.error_seeds.unwrap_or(cfg.error_seeds);
    cfg.stimuli_seeds = a.stimuli_seeds.unwrap_or(cfg.stimuli_seeds);
    cfg.max_stimuli = a.max_stimuli.unwrap_or(cfg.max_stimuli);
    cfg.epsilon = a.epsilon.unwrap_or(cfg.epsilon);
    cfg.master_seed = a.seed.unwrap_or(cfg.master_seed);
    cfg.control |= a.control;
    if a.out.is_some() {
        cfg.output_path = a.out.clone();
    }

    let mut circuits = cfg
        .circuit_paths
        .iter()
        .map(|p| load_circuit(p))
        .collect::<Result<Vec<_>, _>>()?;
    if a.bundled {
        let sizes = a.sizes.unwrap_or_else(|| corpus::BUNDLED_SIZES.to_vec());
        circuits.extend(corpus::bundled_with_sizes(&sizes, cfg.master_seed));
    }
    if circuits.is_empty() {
        bail!("no circuits given (pass files, --bundled, or `circuits` in --config)");
    }

    let result = run_benchmark_on(circuits, &cfg)?;
    let rows = if a.pooled {
        result.rows_by_scheme_and_option()
    } else {
        result.rows
    };
    if let Some(path) = &cfg.output_path {
        write_csv_file(path, &rows)?;
    }
    match a.format {
        Format::Text => print!("{}", text_table(&rows)),
        Format::Csv => print!("{}", csv_string(&rows)),
    }
    Ok(())
}

fn run_mutate(a: MutateArgs) -> Result<()> {
    let circuit = load_circuit(&a.input)?;
    let mutated = mutate(&circuit, a.option, &mut RandomSource::new(a.seed))?;
    write_or_print(a.out.as_deref(), &emit_qasm(&mutated)?)
}

fn run_gen(a: GenArgs) -> Result<()> {
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for c in corpus::bundled_with_sizes(&a.sizes, a.seed) {
        let path = a.out.join(format!("{}.qasm", c.name));
        write_or_print(Some(&path), &emit_qasm(&c)?)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn run_oracle(a: OracleArgs) -> Result<u8> {
    let spec = load_circuit(&a.spec)?;
    let imp = load_circuit(&a.imp)?;
    let u = oracle::build_unitary(&spec)?;
    let v = oracle::build_unitary(&imp)?;
    let f_ent = oracle::ent_fidelity(&u, &v)?;
    let f_avg = oracle::avg_fidelity(&u, &v)?;
    let equal = oracle::equal_up_to_phase(&u, &v, oracle::EQUIVALENCE_TOLERANCE);
    println!("entanglement fidelity: {f_ent:.12}");
    println!("average fidelity:      {f_avg:.12}");
    println!("equivalent:            {equal}");
    Ok(if equal { 0 } else { 1 })
}
