//! File formats, reports and the `qfa` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad usage or malformed input,
//! 3 the learner found no consistent machine, 4 verification failed.

pub mod bench;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use qfa_core::automata::{gen_random_mm, gen_random_mo, gen_random_rfa};
use qfa_core::learner::{LearnError, LearnReport};
use qfa_core::linalg::{TOL_ISO, TOL_RANK};
use qfa_core::verify::{verify, VerifyConfig, VerifyError};
use qfa_core::{learn_mm, learn_mo, learn_rfa, Alphabet, AutomatonError, LearnConfig, Machine, MachineKind, SimulatedOracle};

use crate::format::LoadError;
use crate::report::{LearnReportDoc, VerifyReportDoc};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Automaton(_) | CliError::Verify(_) => 2,
            CliError::Load(LoadError::Format { .. }) => 2,
            CliError::Load(LoadError::Io { .. }) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Learn(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qfa", version, about = "Simulate, learn and verify one-way quantum finite automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random target automaton.
    Gen {
        #[arg(long)]
        kind: MachineKind,
        #[arg(long)]
        states: usize,
        /// Symbols of the input alphabet, e.g. `ab`.
        #[arg(long)]
        alphabet: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Learn a target through a simulated AD oracle.
    Learn {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = TOL_RANK)]
        tol_rank: f64,
        #[arg(long, default_value_t = TOL_ISO)]
        tol_iso: f64,
    },
    /// Compare a learned machine against its target.
    Verify {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        learned: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the acceptance probability of a word.
    Accept {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Sweep gen → learn → verify and write a CSV table.
    Bench {
        #[arg(long)]
        kind: MachineKind,
        /// `A..B` (inclusive) or a comma-separated list.
        #[arg(long)]
        states: String,
        #[arg(long)]
        alphabet_size: usize,
        #[arg(long)]
        seeds: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Formats like C's `%.{digits}g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn cmd_gen(kind: MachineKind, states: usize, alphabet: &str, seed: u64, out: &Path) -> Result<u8, CliError> {
    if states == 0 {
        return Err(CliError::Usage("--states must be at least 1".into()));
    }
    let alphabet = Alphabet::from_chars(alphabet)?;
    let machine = match kind {
        MachineKind::Mo => Machine::Mo(gen_random_mo(states, &alphabet, seed)?),
        MachineKind::Mm => Machine::Mm(gen_random_mm(states, &alphabet, seed)?),
        MachineKind::Rfa => Machine::Rfa(gen_random_rfa(states, &alphabet, seed)?),
    };
    write_file(out, &format::to_json(&machine))?;
    Ok(0)
}

fn learn_machine(target: Machine, cfg: &LearnConfig) -> Result<(Option<Machine>, LearnReport), CliError> {
    Ok(match target {
        Machine::Mo(t) => {
            let (n, a, acc, rej) = (t.n(), t.alphabet().clone(), t.accepting().to_vec(), t.rejecting().to_vec());
            let mut oracle = SimulatedOracle::new(t);
            let res = learn_mo(&mut oracle, n, &a, &acc, &rej, cfg)?;
            (res.hypothesis.map(Machine::Mo), res.report)
        }
        Machine::Mm(t) => {
            let (n, a) = (t.n(), t.alphabet().clone());
            let (acc, rej, go) = (t.accepting().to_vec(), t.rejecting().to_vec(), t.going().to_vec());
            let mut oracle = SimulatedOracle::new(t);
            let res = learn_mm(&mut oracle, n, &a, &acc, &rej, &go, cfg)?;
            (res.hypothesis.map(Machine::Mm), res.report)
        }
        Machine::Rfa(t) => {
            let (a, acc) = (t.alphabet().clone(), t.accepting().to_vec());
            let mut oracle = SimulatedOracle::new(t);
            let res = learn_rfa(&mut oracle, &a, &acc)?;
            (res.hypothesis.map(Machine::Rfa), res.report)
        }
    })
}

pub fn cmd_learn(target: &Path, out: &Path, report: &Path, cfg: &LearnConfig) -> Result<u8, CliError> {
    if !(cfg.tol_rank > 0.0) || !(cfg.tol_iso > 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    let target = format::load(target)?;
    let (hypothesis, learn_report) = learn_machine(target, cfg)?;
    write_file(report, &report::to_json(&LearnReportDoc::from(&learn_report)))?;
    match hypothesis {
        Some(h) => {
            write_file(out, &format::to_json(&h))?;
            Ok(0)
        }
        None => Ok(3),
    }
}

pub fn cmd_verify(
    target: &Path,
    learned: &Path,
    cfg: &VerifyConfig,
    report: Option<&Path>,
    stdout: &mut impl Write,
) -> Result<u8, CliError> {
    let target = format::load(target)?;
    let learned = format::load(learned)?;
    let result = verify(&target, &learned, cfg)?;
    let doc = VerifyReportDoc::from(&result);
    if let Some(path) = report {
        write_file(path, &report::to_json(&doc))?;
    }
    writeln!(
        stdout,
        "{} strings={} trajectory_dev={:e} probability_dev={:e}",
        if result.passed { "PASS" } else { "FAIL" },
        result.strings_checked,
        result.max_trajectory_deviation,
        result.max_probability_deviation
    )
    .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(if result.passed { 0 } else { 4 })
}

pub fn cmd_accept(machine: &Path, word: &str, stdout: &mut impl Write) -> Result<u8, CliError> {
    let machine = format::load(machine)?;
    let lines = match &machine {
        Machine::Mo(m) => vec![("accept", m.accept_prob(word)?)],
        Machine::Mm(m) => {
            let (a, r) = m.probabilities(word)?;
            vec![("accept", a), ("reject", r)]
        }
        Machine::Rfa(g) => vec![("accept", if g.accepts(word)? { 1.0 } else { 0.0 })],
    };
    for (label, p) in lines {
        writeln!(stdout, "{label} {}", format_significant(p, 12)).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(0)
}

pub fn cmd_bench(kind: MachineKind, states: &str, alphabet_size: usize, seeds: u64, out: &Path) -> Result<u8, CliError> {
    let states = bench::parse_states(states).map_err(CliError::Usage)?;
    if alphabet_size == 0 || alphabet_size > 26 {
        return Err(CliError::Usage("--alphabet-size must be between 1 and 26".into()));
    }
    if seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let rows = bench::run(kind, &states, alphabet_size, seeds)?;
    write_file(out, &bench::to_csv(&rows)?)?;
    Ok(0)
}

pub fn execute(cli: Cli) -> Result<u8, CliError> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Gen { kind, states, alphabet, seed, out } => cmd_gen(kind, states, &alphabet, seed, &out),
        Command::Learn { target, out, report, tol_rank, tol_iso } => {
            cmd_learn(&target, &out, &report, &LearnConfig { tol_rank, tol_iso })
        }
        Command::Verify { target, learned, max_len, random, seed, tol, report } => {
            let cfg = VerifyConfig { max_exhaustive_len: max_len, random_trials: random, seed, tol, ..VerifyConfig::default() };
            cmd_verify(&target, &learned, &cfg, report.as_deref(), &mut stdout)
        }
        Command::Accept { machine, word } => cmd_accept(&machine, &word, &mut stdout),
        Command::Bench { kind, states, alphabet_size, seeds, out } => {
            cmd_bench(kind, &states, alphabet_size, seeds, &out)
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
