//! Equivalence evidence between a target and a hypothesis.
//!
//! A learned machine may differ from its target matrix for matrix, so
//! comparisons are made on trajectories and acceptance probabilities over a
//! bounded-exhaustive plus seeded-random set of words.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{Alphabet, Machine, MmQfa, MoQfa, Rfa, Violation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub max_exhaustive_len: usize,
    pub random_trials: usize,
    pub random_max_len: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_exhaustive_len: 5,
            random_trials: 1000,
            random_max_len: 50,
            seed: 0,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub strings_checked: usize,
    pub max_trajectory_deviation: f64,
    pub max_probability_deviation: f64,
    pub worst_string: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("machines differ in shape: {0}")]
    ShapeMismatch(&'static str),
    #[error("invalid verification config: {0}")]
    BadConfig(&'static str),
}

pub type Result<T> = core::result::Result<T, VerifyError>;

/// Lists every violated type invariant; empty when the machine is valid.
pub fn audit(machine: &Machine) -> Vec<Violation> {
    machine.violations()
}

/// All words up to `max_exhaustive_len` in length-lexicographic order, then
/// `random_trials` words with uniformly drawn length and symbols.
pub fn test_words(symbols: usize, cfg: &VerifyConfig) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    for len in 0..=cfg.max_exhaustive_len {
        if len > 0 {
            layer = layer
                .iter()
                .flat_map(|w| {
                    (0..symbols).map(move |k| {
                        let mut next = w.clone();
                        next.push(k);
                        next
                    })
                })
                .collect();
        }
        words.extend(layer.iter().cloned());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_trials {
        let len = rng.random_range(0..=cfg.random_max_len);
        words.push((0..len).map(|_| rng.random_range(0..symbols)).collect());
    }
    words
}

fn decode(alphabet: &Alphabet, word: &[usize]) -> String {
    let syms = alphabet.symbols();
    word.iter()
        .map(|&k| syms.get(k).copied().unwrap_or(alphabet.end_marker()))
        .collect()
}

fn check_cfg(cfg: &VerifyConfig) -> Result<()> {
    if !(cfg.tol > 0.0) {
        return Err(VerifyError::BadConfig("tol must be positive"));
    }
    Ok(())
}

/// Running maxima over the test set.
struct Tally {
    checked: usize,
    trajectory: f64,
    probability: f64,
    worst: f64,
    worst_word: Vec<usize>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, trajectory: 0.0, probability: 0.0, worst: -1.0, worst_word: Vec::new() }
    }

    fn record(&mut self, word: &[usize], trajectory: f64, probability: f64) {
        self.trajectory = self.trajectory.max(trajectory);
        self.probability = self.probability.max(probability);
        let score = trajectory.max(probability);
        if score > self.worst {
            self.worst = score;
            self.worst_word = word.to_vec();
        }
    }

    fn finish(self, alphabet: &Alphabet, tol: f64) -> VerifyReport {
        VerifyReport {
            strings_checked: self.checked,
            max_trajectory_deviation: self.trajectory,
            max_probability_deviation: self.probability,
            worst_string: decode(alphabet, &self.worst_word),
            passed: self.trajectory <= tol && self.probability <= tol,
        }
    }
}

/// Compares measure-once trajectories and acceptance probabilities.
pub fn verify_mo(target: &MoQfa, hyp: &MoQfa, cfg: &VerifyConfig) -> Result<VerifyReport> {
    check_cfg(cfg)?;
    if target.n() != hyp.n() {
        return Err(VerifyError::ShapeMismatch("state count"));
    }
    if target.alphabet() != hyp.alphabet() {
        return Err(VerifyError::ShapeMismatch("alphabet"));
    }
    if target.accepting() != hyp.accepting() || target.rejecting() != hyp.rejecting() {
        return Err(VerifyError::ShapeMismatch("state partition"));
    }
    let mut tally = Tally::new();
    for word in test_words(target.alphabet().len(), cfg) {
        let t = target.trajectory_encoded(&word);
        let h = hyp.trajectory_encoded(&word);
        let dp = (t.weight_on(target.accepting()) - h.weight_on(hyp.accepting())).abs();
        tally.record(&word, t.distance(&h), dp);
        tally.checked += 1;
    }
    Ok(tally.finish(target.alphabet(), cfg.tol))
}

/// Compares measure-many trajectories on `x` and `x$` and the accumulated
/// accept and reject probabilities of `x$`.
pub fn verify_mm(target: &MmQfa, hyp: &MmQfa, cfg: &VerifyConfig) -> Result<VerifyReport> {
    check_cfg(cfg)?;
    if target.n() != hyp.n() {
        return Err(VerifyError::ShapeMismatch("state count"));
    }
    if target.alphabet() != hyp.alphabet() {
        return Err(VerifyError::ShapeMismatch("alphabet"));
    }
    if target.accepting() != hyp.accepting()
        || target.rejecting() != hyp.rejecting()
        || target.going() != hyp.going()
    {
        return Err(VerifyError::ShapeMismatch("state partition"));
    }
    let end = target.alphabet().len();
    let mut tally = Tally::new();
    for mut word in test_words(end, cfg) {
        let d_plain = target.trajectory_encoded(&word).distance(&hyp.trajectory_encoded(&word));
        word.push(end);
        let d_end = target.trajectory_encoded(&word).distance(&hyp.trajectory_encoded(&word));
        let (ta, tr) = target.probabilities_encoded(&word);
        let (ha, hr) = hyp.probabilities_encoded(&word);
        let dp = (ta - ha).abs().max((tr - hr).abs());
        tally.record(&word, d_plain.max(d_end), dp);
        tally.checked += 1;
    }
    Ok(tally.finish(target.alphabet(), cfg.tol))
}

/// Compares acceptance of two reversible automata. Both deviations are the
/// 0/1 indicator of any disagreement; state numbering may differ.
pub fn verify_rfa(target: &Rfa, hyp: &Rfa, cfg: &VerifyConfig) -> Result<VerifyReport> {
    check_cfg(cfg)?;
    if target.alphabet() != hyp.alphabet() {
        return Err(VerifyError::ShapeMismatch("alphabet"));
    }
    let mut tally = Tally::new();
    for word in test_words(target.alphabet().len(), cfg) {
        let differs = target.accepts_encoded(&word) != hyp.accepts_encoded(&word);
        let d = if differs { 1.0 } else { 0.0 };
        tally.record(&word, d, d);
        tally.checked += 1;
    }
    Ok(tally.finish(target.alphabet(), cfg.tol))
}

/// Dispatches on the machine kinds; mismatched kinds are a shape error.
pub fn verify(target: &Machine, hyp: &Machine, cfg: &VerifyConfig) -> Result<VerifyReport> {
    match (target, hyp) {
        (Machine::Mo(t), Machine::Mo(h)) => verify_mo(t, h, cfg),
        (Machine::Mm(t), Machine::Mm(h)) => verify_mm(t, h, cfg),
        (Machine::Rfa(t), Machine::Rfa(h)) => verify_rfa(t, h, cfg),
        _ => Err(VerifyError::ShapeMismatch("machine kind")),
    }
}
