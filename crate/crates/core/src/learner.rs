//! Exact learners driven by an [`AdOracle`].
//!
//! All three share one pattern. A breadth-first search from ε collects
//! oracle replies until every reply is dependent on (or, for reversible
//! automata, equal to) one already seen. Then each symbol's transition is
//! pinned down on that set. For the quantum machines the transition is
//! only determined on a subspace, and the rest is filled in by
//! [`complete_isometry`].

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::automata::{Alphabet, AutomatonError, MmQfa, MoQfa, Rfa};
use crate::linalg::{
    complete_isometry, Complex, ComplexMatrix, ComplexVector, LinalgError, OrthoFrame, ONE, TOL_ISO,
    TOL_RANK, ZERO,
};
use crate::oracle::{AdOracle, OracleError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    pub tol_rank: f64,
    pub tol_iso: f64,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig { tol_rank: TOL_RANK, tol_iso: TOL_ISO }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Learned,
    /// The oracle's replies admit no machine of the requested kind.
    NotExist,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnReport {
    pub distinct_queries: u64,
    pub raw_queries: u64,
    pub basis_size: usize,
    /// Largest `‖V(σ)·v − reply‖` over all constraints, after solving.
    pub max_constraint_residual: f64,
    pub max_unitarity_defect: f64,
    pub outcome: Outcome,
    /// Seconds; zero when built without `std`.
    pub wall_time: f64,
}

/// Hypothesis (absent on [`Outcome::NotExist`]) plus the run's evidence.
#[derive(Debug, Clone)]
pub struct LearnResult<M> {
    pub hypothesis: Option<M>,
    pub report: LearnReport,
    /// Witness strings of the basis, in discovery order.
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearnError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("oracle has dimension {oracle}, expected {expected}")]
    DimensionMismatch { oracle: usize, expected: usize },
    #[error("oracle alphabet differs from the requested alphabet")]
    AlphabetMismatch,
    #[error("reply to {query:?} is not a standard basis vector")]
    NonBasisReply { query: String },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = core::result::Result<T, LearnError>;

/// The growing set of independent oracle replies.
#[derive(Debug, Clone)]
pub struct BasisSet {
    entries: Vec<(String, ComplexVector)>,
    frame: TrackedFrame,
}

impl BasisSet {
    pub fn new(dim: usize) -> Self {
        BasisSet { entries: Vec::new(), frame: TrackedFrame::new(dim) }
    }

    /// Adds `(x, v)` when `v` is outside the current span.
    pub fn try_insert(&mut self, x: &str, v: ComplexVector, tol_rank: f64) -> Result<bool> {
        let grew = matches!(self.frame.push(&v, tol_rank)?, Membership::Independent);
        if grew {
            self.entries.push((String::from(x), v));
        } else {
            self.frame.forget_last();
        }
        Ok(grew)
    }

    pub fn entries(&self) -> &[(String, ComplexVector)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn frame(&self) -> &OrthoFrame {
        &self.frame.frame
    }
}

#[derive(Debug, Clone)]
enum Membership {
    Independent,
    /// Coefficients on the frame vectors present when the source was pushed.
    Dependent(Vec<Complex>),
}

/// An orthonormal frame over a list of source vectors that remembers how
/// every frame vector expands in the sources.
#[derive(Debug, Clone)]
struct TrackedFrame {
    frame: OrthoFrame,
    /// `frame[j] = Σ_i expansion[j][i] · source_i`; rows are padded lazily.
    expansion: Vec<Vec<Complex>>,
    members: Vec<Membership>,
}

impl TrackedFrame {
    fn new(dim: usize) -> Self {
        TrackedFrame { frame: OrthoFrame::new(dim), expansion: Vec::new(), members: Vec::new() }
    }

    fn push(&mut self, v: &ComplexVector, tol_rank: f64) -> Result<&Membership> {
        let source = self.members.len();
        let (grew, res) = self.frame.extend_with_residual(v, tol_rank)?;
        let membership = if grew {
            // f_new = (v − Σ_j c_j f_j) / ‖r‖
            let inv = 1.0 / res.norm;
            let mut row = vec![ZERO; source + 1];
            for (c, prev) in res.coefficients.iter().zip(&self.expansion) {
                for (slot, e) in row.iter_mut().zip(prev) {
                    *slot -= c * e;
                }
            }
            row[source] += ONE;
            for slot in &mut row {
                *slot *= inv;
            }
            self.expansion.push(row);
            Membership::Independent
        } else {
            Membership::Dependent(res.coefficients)
        };
        self.members.push(membership);
        Ok(self.members.last().expect("just pushed"))
    }

    fn forget_last(&mut self) {
        if let Some(Membership::Dependent(_)) = self.members.last() {
            self.members.pop();
        }
    }

    /// Images of the frame vectors, given the image of every source.
    fn frame_images(&self, source_images: &[ComplexVector]) -> Vec<ComplexVector> {
        let dim = self.frame.dim();
        self.expansion
            .iter()
            .map(|row| {
                let mut img = ComplexVector::zeros(dim);
                for (c, s) in row.iter().zip(source_images) {
                    img.axpy(*c, s);
                }
                img
            })
            .collect()
    }

    /// Largest mismatch between a dependent source's required image and the
    /// image its expansion predicts.
    fn dependent_inconsistency(
        &self,
        frame_images: &[ComplexVector],
        source_images: &[ComplexVector],
    ) -> f64 {
        let mut worst: f64 = 0.0;
        for (member, target) in self.members.iter().zip(source_images) {
            if let Membership::Dependent(coeffs) = member {
                let mut predicted = ComplexVector::zeros(self.frame.dim());
                for (c, img) in coeffs.iter().zip(frame_images) {
                    predicted.axpy(*c, img);
                }
                worst = worst.max(predicted.distance(target));
            }
        }
        worst
    }
}

struct Stopwatch {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    fn seconds(&self) -> f64 {
        #[cfg(feature = "std")]
        {
            self.start.elapsed().as_secs_f64()
        }
        #[cfg(not(feature = "std"))]
        {
            0.0
        }
    }
}

fn check_oracle<O: AdOracle>(oracle: &O, n: usize, alphabet: &Alphabet) -> Result<()> {
    if oracle.dim() != n {
        return Err(LearnError::DimensionMismatch { oracle: oracle.dim(), expected: n });
    }
    if oracle.alphabet() != alphabet {
        return Err(LearnError::AlphabetMismatch);
    }
    Ok(())
}

fn with_symbol(x: &str, s: char) -> String {
    let mut out = String::with_capacity(x.len() + s.len_utf8());
    out.push_str(x);
    out.push(s);
    out
}

/// Breadth-first basis search over Σ*: a node whose reply is independent of
/// the basis joins it and spawns one child per symbol, in alphabet order.
fn search_basis<O: AdOracle>(
    oracle: &mut O,
    alphabet: &Alphabet,
    n: usize,
    tol_rank: f64,
) -> Result<BasisSet> {
    let mut basis = BasisSet::new(n);
    let mut frontier: VecDeque<String> = VecDeque::from([String::new()]);
    while let Some(x) = frontier.pop_front() {
        let v = oracle.query(&x)?;
        if basis.try_insert(&x, v, tol_rank)? {
            frontier.extend(alphabet.symbols().iter().map(|&s| with_symbol(&x, s)));
        }
    }
    Ok(basis)
}

/// Solves one symbol's unitary from constraints `V · source_i = target_i`.
///
/// `None` means the constraints admit no unitary.
fn solve_symbol(
    frame: &TrackedFrame,
    sources: &[ComplexVector],
    targets: &[ComplexVector],
    tol_iso: f64,
) -> Result<Option<(ComplexMatrix, f64)>> {
    let images = frame.frame_images(targets);
    if !(frame.dependent_inconsistency(&images, targets) <= tol_iso) {
        return Ok(None);
    }
    let v = match complete_isometry(&frame.frame, &images, tol_iso) {
        Ok(v) => v,
        Err(LinalgError::IsometryViolation { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let residual = sources
        .iter()
        .zip(targets)
        .map(|(s, t)| v.mul_vec(s).distance(t))
        .fold(0.0, f64::max);
    Ok(Some((v, residual)))
}

struct Solved {
    unitaries: Vec<ComplexMatrix>,
    max_residual: f64,
    max_defect: f64,
}

fn solve_all(
    frame: &TrackedFrame,
    sources: &[ComplexVector],
    targets_per_symbol: Vec<Vec<ComplexVector>>,
    tol_iso: f64,
) -> Result<Option<Solved>> {
    let mut solved = Solved { unitaries: Vec::new(), max_residual: 0.0, max_defect: 0.0 };
    for targets in targets_per_symbol {
        let Some((v, residual)) = solve_symbol(frame, sources, &targets, tol_iso)? else {
            return Ok(None);
        };
        solved.max_residual = solved.max_residual.max(residual);
        solved.max_defect = solved.max_defect.max(v.unitarity_defect()?);
        solved.unitaries.push(v);
    }
    Ok(Some(solved))
}

fn report<O: AdOracle>(
    oracle: &O,
    basis_size: usize,
    solved: Option<&Solved>,
    clock: &Stopwatch,
) -> LearnReport {
    LearnReport {
        distinct_queries: oracle.distinct_queries(),
        raw_queries: oracle.raw_queries(),
        basis_size,
        max_constraint_residual: solved.map_or(0.0, |s| s.max_residual),
        max_unitarity_defect: solved.map_or(0.0, |s| s.max_defect),
        outcome: if solved.is_some() { Outcome::Learned } else { Outcome::NotExist },
        wall_time: clock.seconds(),
    }
}

fn witnesses(basis: &BasisSet) -> Vec<String> {
    basis.entries().iter().map(|(x, _)| x.clone()).collect()
}

/// Learns a measure-once QFA with `n` states.
///
/// `accepting` and `rejecting` are the known state classes; `|ψ₀⟩` and every
/// `U(σ)` come from the oracle. The hypothesis reproduces every trajectory of
/// the target but need not equal it matrix for matrix.
pub fn learn_mo<O: AdOracle>(
    oracle: &mut O,
    n: usize,
    alphabet: &Alphabet,
    accepting: &[usize],
    rejecting: &[usize],
    cfg: &LearnConfig,
) -> Result<LearnResult<MoQfa>> {
    check_oracle(oracle, n, alphabet)?;
    let clock = Stopwatch::start();
    let initial = oracle.query("")?;
    let basis = search_basis(oracle, alphabet, n, cfg.tol_rank)?;

    let sources: Vec<ComplexVector> = basis.entries().iter().map(|(_, v)| v.clone()).collect();
    let mut targets = Vec::with_capacity(alphabet.len());
    for &s in alphabet.symbols() {
        let per_entry = basis
            .entries()
            .iter()
            .map(|(x, _)| oracle.query(&with_symbol(x, s)))
            .collect::<core::result::Result<Vec<_>, _>>()?;
        targets.push(per_entry);
    }

    let solved = solve_all(&basis.frame, &sources, targets, cfg.tol_iso)?;
    let report = report(oracle, basis.len(), solved.as_ref(), &clock);
    let hypothesis = match solved {
        Some(s) => Some(MoQfa::new(
            alphabet.clone(),
            initial,
            s.unitaries,
            accepting.to_vec(),
            rejecting.to_vec(),
        )?),
        None => None,
    };
    Ok(LearnResult { hypothesis, report, basis: witnesses(&basis) })
}

/// Learns a measure-many QFA with `n` states over `Σ ∪ {end marker}`.
///
/// The basis is searched over Σ* exactly as for measure-once machines. The
/// constraints then act on the going-state projections `P(g)·v*(x)`, which
/// may be dependent or zero: dependent ones are checked for consistency and
/// zero ones constrain nothing.
pub fn learn_mm<O: AdOracle>(
    oracle: &mut O,
    n: usize,
    alphabet: &Alphabet,
    accepting: &[usize],
    rejecting: &[usize],
    going: &[usize],
    cfg: &LearnConfig,
) -> Result<LearnResult<MmQfa>> {
    check_oracle(oracle, n, alphabet)?;
    let clock = Stopwatch::start();
    let end = alphabet.end_marker();
    let initial = oracle.query("")?;
    oracle.query(&with_symbol("", end))?;
    let basis = search_basis(oracle, alphabet, n, cfg.tol_rank)?;

    let mut projected = TrackedFrame::new(n);
    let mut sources = Vec::with_capacity(basis.len());
    for (_, v) in basis.entries() {
        let p = v.project(going);
        projected.push(&p, cfg.tol_rank)?;
        sources.push(p);
    }

    let mut targets = Vec::with_capacity(alphabet.len() + 1);
    for s in alphabet.symbols().iter().copied().chain([end]) {
        let per_entry = basis
            .entries()
            .iter()
            .map(|(x, _)| oracle.query(&with_symbol(x, s)))
            .collect::<core::result::Result<Vec<_>, _>>()?;
        targets.push(per_entry);
    }

    let solved = solve_all(&projected, &sources, targets, cfg.tol_iso)?;
    let report = report(oracle, basis.len(), solved.as_ref(), &clock);
    let hypothesis = match solved {
        Some(s) => Some(MmQfa::new(
            alphabet.clone(),
            initial,
            s.unitaries,
            accepting.to_vec(),
            rejecting.to_vec(),
            going.to_vec(),
        )?),
        None => None,
    };
    Ok(LearnResult { hypothesis, report, basis: witnesses(&basis) })
}

fn basis_index(v: &ComplexVector, query: &str) -> Result<usize> {
    let mut found = None;
    for (i, c) in v.iter().enumerate() {
        if *c == ONE && found.is_none() {
            found = Some(i);
        } else if *c != ZERO {
            return Err(LearnError::NonBasisReply { query: String::from(query) });
        }
    }
    found.ok_or_else(|| LearnError::NonBasisReply { query: String::from(query) })
}

/// Learns a reversible automaton by exploring the states reachable from `s₀`.
///
/// `accepting` lists the target's accepting states by the oracle's indices.
/// The hypothesis numbers states in discovery order and keeps only the
/// reachable part, which is all that any input can observe.
pub fn learn_rfa<O: AdOracle>(
    oracle: &mut O,
    alphabet: &Alphabet,
    accepting: &[usize],
) -> Result<LearnResult<Rfa>> {
    if oracle.alphabet() != alphabet {
        return Err(LearnError::AlphabetMismatch);
    }
    let clock = Stopwatch::start();
    let n = oracle.dim();
    let mut renumber: Vec<Option<usize>> = vec![None; n];
    let mut witness: Vec<String> = Vec::new();
    let mut original: Vec<usize> = Vec::new();

    let s0 = basis_index(&oracle.query("")?, "")?;
    renumber[s0] = Some(0);
    witness.push(String::new());
    original.push(s0);

    let mut delta: Vec<Vec<usize>> = vec![Vec::new(); alphabet.len()];
    let mut next = 0;
    while next < witness.len() {
        let x = witness[next].clone();
        for (k, &s) in alphabet.symbols().iter().enumerate() {
            let xs = with_symbol(&x, s);
            let t = basis_index(&oracle.query(&xs)?, &xs)?;
            let id = match renumber[t] {
                Some(id) => id,
                None => {
                    let id = witness.len();
                    renumber[t] = Some(id);
                    witness.push(xs);
                    original.push(t);
                    id
                }
            };
            delta[k].push(id);
        }
        next += 1;
    }

    let states = witness.len();
    let hyp_accepting: Vec<usize> =
        (0..states).filter(|&id| accepting.contains(&original[id])).collect();
    let hypothesis = Rfa::new(states, 0, alphabet.clone(), delta, hyp_accepting).ok();
    let report = LearnReport {
        distinct_queries: oracle.distinct_queries(),
        raw_queries: oracle.raw_queries(),
        basis_size: states,
        max_constraint_residual: 0.0,
        max_unitarity_defect: 0.0,
        outcome: if hypothesis.is_some() { Outcome::Learned } else { Outcome::NotExist },
        wall_time: clock.seconds(),
    };
    Ok(LearnResult { hypothesis, report, basis: witness })
}
