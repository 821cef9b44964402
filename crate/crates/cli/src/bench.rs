//! gen → learn → verify sweeps written as CSV.

use std::time::Instant;

use serde::Serialize;

use qfa_core::automata::{gen_random_mm, gen_random_mo, gen_random_rfa};
use qfa_core::learner::LearnReport;
use qfa_core::verify::{verify_mm, verify_mo, verify_rfa, VerifyConfig, VerifyReport};
use qfa_core::{learn_mm, learn_mo, learn_rfa, Alphabet, LearnConfig, MachineKind, SimulatedOracle};

use crate::CliError;

/// Column order is the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub kind: String,
    pub n: usize,
    pub alphabet_size: usize,
    pub seed: u64,
    pub distinct_queries: u64,
    pub raw_queries: u64,
    pub basis_size: usize,
    pub learn_wall_time_s: f64,
    pub verify_max_deviation: f64,
}

pub const HEADER: &str = "kind,n,alphabet_size,seed,distinct_queries,raw_queries,basis_size,learn_wall_time_s,verify_max_deviation";

/// Parses `A..B` (inclusive) or a comma-separated list of state counts.
pub fn parse_states(text: &str) -> Result<Vec<usize>, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad state count {s:?}"));
    let states: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        (a..=b).collect()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if states.is_empty() {
        return Err(format!("state range {text:?} is empty"));
    }
    if states.contains(&0) {
        return Err("state counts must be at least 1".into());
    }
    Ok(states)
}

fn row(
    kind: MachineKind,
    n: usize,
    alphabet: &Alphabet,
    seed: u64,
    learn: &LearnReport,
    elapsed: f64,
    verify: Option<&VerifyReport>,
) -> BenchRow {
    BenchRow {
        kind: kind.to_string(),
        n,
        alphabet_size: alphabet.len(),
        seed,
        distinct_queries: learn.distinct_queries,
        raw_queries: learn.raw_queries,
        basis_size: learn.basis_size,
        learn_wall_time_s: elapsed,
        verify_max_deviation: verify
            .map_or(f64::INFINITY, |v| v.max_trajectory_deviation.max(v.max_probability_deviation)),
    }
}

/// Runs one cell. A `NotExist` outcome is reported as infinite deviation.
pub fn run_cell(kind: MachineKind, n: usize, alphabet: &Alphabet, seed: u64) -> Result<BenchRow, CliError> {
    let learn_cfg = LearnConfig::default();
    let verify_cfg = VerifyConfig::default();
    match kind {
        MachineKind::Mo => {
            let target = gen_random_mo(n, alphabet, seed)?;
            let mut oracle = SimulatedOracle::new(target.clone());
            let start = Instant::now();
            let res = learn_mo(&mut oracle, n, alphabet, target.accepting(), target.rejecting(), &learn_cfg)?;
            let elapsed = start.elapsed().as_secs_f64();
            let verified = match &res.hypothesis {
                Some(h) => Some(verify_mo(&target, h, &verify_cfg)?),
                None => None,
            };
            Ok(row(kind, n, alphabet, seed, &res.report, elapsed, verified.as_ref()))
        }
        MachineKind::Mm => {
            let target = gen_random_mm(n, alphabet, seed)?;
            let mut oracle = SimulatedOracle::new(target.clone());
            let start = Instant::now();
            let res = learn_mm(
                &mut oracle,
                n,
                alphabet,
                target.accepting(),
                target.rejecting(),
                target.going(),
                &learn_cfg,
            )?;
            let elapsed = start.elapsed().as_secs_f64();
            let verified = match &res.hypothesis {
                Some(h) => Some(verify_mm(&target, h, &verify_cfg)?),
                None => None,
            };
            Ok(row(kind, n, alphabet, seed, &res.report, elapsed, verified.as_ref()))
        }
        MachineKind::Rfa => {
            let target = gen_random_rfa(n, alphabet, seed)?;
            let mut oracle = SimulatedOracle::new(target.clone());
            let start = Instant::now();
            let res = learn_rfa(&mut oracle, alphabet, target.accepting())?;
            let elapsed = start.elapsed().as_secs_f64();
            let verified = match &res.hypothesis {
                Some(h) => Some(verify_rfa(&target, h, &verify_cfg)?),
                None => None,
            };
            Ok(row(kind, n, alphabet, seed, &res.report, elapsed, verified.as_ref()))
        }
    }
}

/// One row per (n, seed) cell, states outermost.
pub fn run(kind: MachineKind, states: &[usize], alphabet_size: usize, seeds: u64) -> Result<Vec<BenchRow>, CliError> {
    let alphabet = Alphabet::latin(alphabet_size)?;
    let mut rows = Vec::new();
    for &n in states {
        for seed in 0..seeds {
            rows.push(run_cell(kind, n, &alphabet, seed)?);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
