//! Measure-once and measure-many one-way quantum finite automata, reversible
//! finite automata, and the random targets the learners are exercised on.
//!
//! State `i` is the basis vector `e_i`. Words are read left to right and each
//! symbol's unitary is applied by left multiplication, so after `σ₁…σ_k` the
//! measure-once state is `U(σ_k)···U(σ₁)|ψ₀⟩`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Complex, ComplexMatrix, ComplexVector, OrthoFrame};

/// Tolerance used when validating machines.
pub const TOL_MACHINE: f64 = 1e-10;

pub const DEFAULT_END_MARKER: char = '$';

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AutomatonError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("symbol {0:?} occurs more than once in the alphabet")]
    DuplicateSymbol(char),
    #[error("end marker {0:?} must not be an alphabet symbol")]
    EndMarkerInAlphabet(char),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    #[error("a machine needs at least one state")]
    NoStates,
    #[error("invalid machine: {}", list_violations(.0))]
    Invalid(Vec<Violation>),
}

fn list_violations(vs: &[Violation]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        let _ = write!(s, "{v}");
    }
    s
}

pub type Result<T> = core::result::Result<T, AutomatonError>;

/// A broken type invariant, reported by [`crate::verify::audit`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A component has the wrong size.
    Shape { what: &'static str, expected: usize, found: usize },
    /// The initial vector is not a unit vector.
    Normalization { norm: f64 },
    Unitarity { symbol: char, defect: f64 },
    /// A state index in a partition class is `≥ n`.
    IndexOutOfRange { class: &'static str, index: usize },
    /// A state index listed twice within or across classes.
    Overlap { index: usize },
    /// A state that belongs to no class.
    Uncovered { index: usize },
    NotPermutation { symbol: char },
    InitialOutOfRange { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { what, expected, found } => {
                write!(f, "shape: {what} has size {found}, expected {expected}")
            }
            Violation::Normalization { norm } => {
                write!(f, "normalization: initial vector has norm {norm}")
            }
            Violation::Unitarity { symbol, defect } => {
                write!(f, "unitarity: U({symbol}) has defect {defect:e}")
            }
            Violation::IndexOutOfRange { class, index } => {
                write!(f, "partition: {class} state {index} out of range")
            }
            Violation::Overlap { index } => write!(f, "partition: state {index} listed twice"),
            Violation::Uncovered { index } => write!(f, "partition: state {index} has no class"),
            Violation::NotPermutation { symbol } => {
                write!(f, "permutation: delta({symbol}) is not a bijection")
            }
            Violation::InitialOutOfRange { index } => {
                write!(f, "initial state {index} out of range")
            }
        }
    }
}

/// Input alphabet Σ, plus the end marker used by measure-many machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    end_marker: char,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        Self::with_end_marker(symbols, DEFAULT_END_MARKER)
    }

    pub fn with_end_marker(symbols: Vec<char>, end_marker: char) -> Result<Self> {
        if symbols.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(AutomatonError::DuplicateSymbol(*s));
            }
        }
        if symbols.contains(&end_marker) {
            return Err(AutomatonError::EndMarkerInAlphabet(end_marker));
        }
        Ok(Alphabet { symbols, end_marker })
    }

    /// Alphabet made of the characters of `s`, in order.
    pub fn from_chars(s: &str) -> Result<Self> {
        Self::new(s.chars().collect())
    }

    /// The first `size` lowercase letters.
    pub fn latin(size: usize) -> Result<Self> {
        Self::new((b'a'..=b'z').take(size).map(char::from).collect())
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn end_marker(&self) -> char {
        self.end_marker
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    /// Symbol indices of a word over Σ.
    pub fn encode(&self, w: &str) -> Result<Vec<usize>> {
        w.chars()
            .map(|c| self.index_of(c).ok_or(AutomatonError::UnknownSymbol(c)))
            .collect()
    }

    /// Symbol indices of a word over Γ = Σ ∪ {end marker}; the end marker maps
    /// to index `len()`.
    pub fn encode_with_end(&self, w: &str) -> Result<Vec<usize>> {
        w.chars()
            .map(|c| {
                if c == self.end_marker {
                    Ok(self.symbols.len())
                } else {
                    self.index_of(c).ok_or(AutomatonError::UnknownSymbol(c))
                }
            })
            .collect()
    }
}

/// Measure-once one-way QFA `(Q, |ψ₀⟩, {U(σ)}, Q_a, Q_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoQfa {
    alphabet: Alphabet,
    initial: ComplexVector,
    unitaries: Vec<ComplexMatrix>,
    accepting: Vec<usize>,
    rejecting: Vec<usize>,
}

impl MoQfa {
    /// `unitaries[k]` belongs to `alphabet.symbols()[k]`. Fails with
    /// [`AutomatonError::Invalid`] on any invariant violation.
    pub fn new(
        alphabet: Alphabet,
        initial: ComplexVector,
        unitaries: Vec<ComplexMatrix>,
        accepting: Vec<usize>,
        rejecting: Vec<usize>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(alphabet, initial, unitaries, accepting, rejecting);
        validated(m, MoQfa::violations)
    }

    /// Builds without validation; [`crate::verify::audit`] reports what is wrong.
    pub fn new_unchecked(
        alphabet: Alphabet,
        initial: ComplexVector,
        unitaries: Vec<ComplexMatrix>,
        mut accepting: Vec<usize>,
        mut rejecting: Vec<usize>,
    ) -> Self {
        accepting.sort_unstable();
        rejecting.sort_unstable();
        MoQfa { alphabet, initial, unitaries, accepting, rejecting }
    }

    pub fn n(&self) -> usize {
        self.initial.dim()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> &ComplexVector {
        &self.initial
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn unitary(&self, symbol: char) -> Option<&ComplexMatrix> {
        self.alphabet.index_of(symbol).map(|k| &self.unitaries[k])
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn rejecting(&self) -> &[usize] {
        &self.rejecting
    }

    /// Replaces one symbol's unitary, re-validating the machine.
    pub fn with_unitary(mut self, symbol: char, u: ComplexMatrix) -> Result<Self> {
        let k = self.alphabet.index_of(symbol).ok_or(AutomatonError::UnknownSymbol(symbol))?;
        self.unitaries[k] = u;
        validated(self, MoQfa::violations)
    }

    pub(crate) fn violations(&self) -> Vec<Violation> {
        let n = self.n();
        let mut out = Vec::new();
        check_initial(&self.initial, &mut out);
        check_unitaries(n, self.alphabet.symbols(), &self.unitaries, &mut out);
        check_partition(n, &[("accepting", &self.accepting), ("rejecting", &self.rejecting)], &mut out);
        out
    }

    /// `U(σ_k)···U(σ₁)|ψ₀⟩` for `w = σ₁…σ_k`.
    pub fn trajectory(&self, w: &str) -> Result<ComplexVector> {
        let word = self.alphabet.encode(w)?;
        Ok(self.trajectory_encoded(&word))
    }

    pub(crate) fn trajectory_encoded(&self, word: &[usize]) -> ComplexVector {
        word.iter()
            .fold(self.initial.clone(), |state, &k| self.unitaries[k].mul_vec(&state))
    }

    /// `‖P(a) U(w) |ψ₀⟩‖²`, clamped to `[0, 1]`.
    pub fn accept_prob(&self, w: &str) -> Result<f64> {
        Ok(clamp_prob(self.trajectory(w)?.weight_on(&self.accepting)))
    }
}

/// Measure-many one-way QFA `(Q, |ψ₀⟩, {U(σ)}_{σ∈Σ∪{$}}, Q_a, Q_r, Q_g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MmQfa {
    alphabet: Alphabet,
    initial: ComplexVector,
    /// One per symbol of Σ in order, then the end marker.
    unitaries: Vec<ComplexMatrix>,
    accepting: Vec<usize>,
    rejecting: Vec<usize>,
    going: Vec<usize>,
}

impl MmQfa {
    /// `unitaries` lists Σ in alphabet order followed by the end marker's unitary.
    pub fn new(
        alphabet: Alphabet,
        initial: ComplexVector,
        unitaries: Vec<ComplexMatrix>,
        accepting: Vec<usize>,
        rejecting: Vec<usize>,
        going: Vec<usize>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(alphabet, initial, unitaries, accepting, rejecting, going);
        validated(m, MmQfa::violations)
    }

    pub fn new_unchecked(
        alphabet: Alphabet,
        initial: ComplexVector,
        unitaries: Vec<ComplexMatrix>,
        mut accepting: Vec<usize>,
        mut rejecting: Vec<usize>,
        mut going: Vec<usize>,
    ) -> Self {
        accepting.sort_unstable();
        rejecting.sort_unstable();
        going.sort_unstable();
        MmQfa { alphabet, initial, unitaries, accepting, rejecting, going }
    }

    pub fn n(&self) -> usize {
        self.initial.dim()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> &ComplexVector {
        &self.initial
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// Unitary for a symbol of Γ, the end marker included.
    pub fn unitary(&self, symbol: char) -> Option<&ComplexMatrix> {
        if symbol == self.alphabet.end_marker() {
            self.unitaries.last()
        } else {
            self.alphabet.index_of(symbol).map(|k| &self.unitaries[k])
        }
    }

    pub fn end_unitary(&self) -> &ComplexMatrix {
        &self.unitaries[self.alphabet.len()]
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn rejecting(&self) -> &[usize] {
        &self.rejecting
    }

    pub fn going(&self) -> &[usize] {
        &self.going
    }

    pub fn with_unitary(mut self, symbol: char, u: ComplexMatrix) -> Result<Self> {
        let k = if symbol == self.alphabet.end_marker() {
            self.alphabet.len()
        } else {
            self.alphabet.index_of(symbol).ok_or(AutomatonError::UnknownSymbol(symbol))?
        };
        self.unitaries[k] = u;
        validated(self, MmQfa::violations)
    }

    pub(crate) fn violations(&self) -> Vec<Violation> {
        let n = self.n();
        let mut out = Vec::new();
        check_initial(&self.initial, &mut out);
        let mut names: Vec<char> = self.alphabet.symbols().to_vec();
        names.push(self.alphabet.end_marker());
        check_unitaries(n, &names, &self.unitaries, &mut out);
        check_partition(
            n,
            &[("accepting", &self.accepting), ("rejecting", &self.rejecting), ("going", &self.going)],
            &mut out,
        );
        out
    }

    /// `U(σ_k)P(g)···U(σ₁)P(g)|ψ₀⟩` for `x = σ₁…σ_k` over Γ; `|ψ₀⟩` for ε.
    pub fn trajectory(&self, x: &str) -> Result<ComplexVector> {
        let word = self.alphabet.encode_with_end(x)?;
        Ok(self.trajectory_encoded(&word))
    }

    pub(crate) fn trajectory_encoded(&self, word: &[usize]) -> ComplexVector {
        word.iter().fold(self.initial.clone(), |state, &k| {
            self.unitaries[k].mul_vec(&state.project(&self.going))
        })
    }

    /// Accumulated `(accept, reject)` probabilities of `w$`, `w` over Σ.
    ///
    /// After each symbol the accepting and rejecting weights are collected
    /// and only the going component continues. Whatever is still going after
    /// the end marker counts towards neither.
    pub fn probabilities(&self, w: &str) -> Result<(f64, f64)> {
        let mut word = self.alphabet.encode(w)?;
        word.push(self.alphabet.len());
        Ok(self.probabilities_encoded(&word))
    }

    pub(crate) fn probabilities_encoded(&self, word_with_end: &[usize]) -> (f64, f64) {
        let mut state = self.initial.clone();
        let (mut accept, mut reject) = (0.0, 0.0);
        for &k in word_with_end {
            let next = self.unitaries[k].mul_vec(&state);
            accept += next.weight_on(&self.accepting);
            reject += next.weight_on(&self.rejecting);
            state = next.project(&self.going);
        }
        (clamp_prob(accept), clamp_prob(reject))
    }

    pub fn accept_prob(&self, w: &str) -> Result<f64> {
        Ok(self.probabilities(w)?.0)
    }

    pub fn reject_prob(&self, w: &str) -> Result<f64> {
        Ok(self.probabilities(w)?.1)
    }
}

/// Reversible (group) finite automaton `(S, s₀, Σ, δ, S_a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rfa {
    states: usize,
    initial: usize,
    alphabet: Alphabet,
    /// `delta[k][s]` is the successor of `s` on symbol `k`.
    delta: Vec<Vec<usize>>,
    accepting: Vec<usize>,
}

impl Rfa {
    pub fn new(
        states: usize,
        initial: usize,
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        accepting: Vec<usize>,
    ) -> Result<Self> {
        if states == 0 {
            return Err(AutomatonError::NoStates);
        }
        let g = Self::new_unchecked(states, initial, alphabet, delta, accepting);
        validated(g, Rfa::violations)
    }

    pub fn new_unchecked(
        states: usize,
        initial: usize,
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        mut accepting: Vec<usize>,
    ) -> Self {
        accepting.sort_unstable();
        Rfa { states, initial, alphabet, delta, accepting }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn with_delta(mut self, symbol: char, perm: Vec<usize>) -> Result<Self> {
        let k = self.alphabet.index_of(symbol).ok_or(AutomatonError::UnknownSymbol(symbol))?;
        self.delta[k] = perm;
        validated(self, Rfa::violations)
    }

    pub(crate) fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.initial >= self.states {
            out.push(Violation::InitialOutOfRange { index: self.initial });
        }
        if self.delta.len() != self.alphabet.len() {
            out.push(Violation::Shape {
                what: "delta",
                expected: self.alphabet.len(),
                found: self.delta.len(),
            });
        }
        for (perm, &symbol) in self.delta.iter().zip(self.alphabet.symbols()) {
            let mut seen = vec![false; self.states];
            let bijective = perm.len() == self.states
                && perm.iter().all(|&t| t < self.states && !core::mem::replace(&mut seen[t], true));
            if !bijective {
                out.push(Violation::NotPermutation { symbol });
            }
        }
        let mut seen = vec![false; self.states];
        for &s in &self.accepting {
            if s >= self.states {
                out.push(Violation::IndexOutOfRange { class: "accepting", index: s });
            } else if core::mem::replace(&mut seen[s], true) {
                out.push(Violation::Overlap { index: s });
            }
        }
        out
    }

    /// State reached from `s₀` after reading `w`.
    pub fn run(&self, w: &str) -> Result<usize> {
        self.run_from(self.initial, w)
    }

    pub fn run_from(&self, start: usize, w: &str) -> Result<usize> {
        let word = self.alphabet.encode(w)?;
        Ok(self.run_encoded(start, &word))
    }

    pub(crate) fn run_encoded(&self, start: usize, word: &[usize]) -> usize {
        word.iter().fold(start, |s, &k| self.delta[k][s])
    }

    pub fn accepts(&self, w: &str) -> Result<bool> {
        Ok(self.accepting.binary_search(&self.run(w)?).is_ok())
    }

    pub(crate) fn accepts_encoded(&self, word: &[usize]) -> bool {
        self.accepting.binary_search(&self.run_encoded(self.initial, word)).is_ok()
    }

    /// The same automaton as a measure-once QFA with permutation unitaries.
    pub fn to_mo(&self) -> MoQfa {
        let n = self.states;
        let rejecting = (0..n).filter(|s| self.accepting.binary_search(s).is_err()).collect();
        MoQfa::new_unchecked(
            self.alphabet.clone(),
            ComplexVector::basis(n, self.initial),
            self.delta.iter().map(|p| ComplexMatrix::permutation(p)).collect(),
            self.accepting.clone(),
            rejecting,
        )
    }
}

/// Free-function form of [`Rfa::to_mo`].
pub fn rfa_to_mo(g: &Rfa) -> MoQfa {
    g.to_mo()
}

/// Any of the three machine kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum Machine {
    Mo(MoQfa),
    Mm(MmQfa),
    Rfa(Rfa),
}

impl Machine {
    pub fn kind(&self) -> MachineKind {
        match self {
            Machine::Mo(_) => MachineKind::Mo,
            Machine::Mm(_) => MachineKind::Mm,
            Machine::Rfa(_) => MachineKind::Rfa,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Machine::Mo(m) => m.alphabet(),
            Machine::Mm(m) => m.alphabet(),
            Machine::Rfa(g) => g.alphabet(),
        }
    }

    pub fn states(&self) -> usize {
        match self {
            Machine::Mo(m) => m.n(),
            Machine::Mm(m) => m.n(),
            Machine::Rfa(g) => g.states(),
        }
    }

    pub(crate) fn violations(&self) -> Vec<Violation> {
        match self {
            Machine::Mo(m) => m.violations(),
            Machine::Mm(m) => m.violations(),
            Machine::Rfa(g) => g.violations(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MachineKind {
    Mo,
    Mm,
    Rfa,
}

impl MachineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MachineKind::Mo => "mo",
            MachineKind::Mm => "mm",
            MachineKind::Rfa => "rfa",
        }
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for MachineKind {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "mo" => Ok(MachineKind::Mo),
            "mm" => Ok(MachineKind::Mm),
            "rfa" => Ok(MachineKind::Rfa),
            other => Err(alloc::format!("unknown machine kind {other:?} (expected mo, mm or rfa)")),
        }
    }
}

fn validated<M>(m: M, violations: impl Fn(&M) -> Vec<Violation>) -> Result<M> {
    let vs = violations(&m);
    if vs.is_empty() {
        Ok(m)
    } else {
        Err(AutomatonError::Invalid(vs))
    }
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

fn check_initial(initial: &ComplexVector, out: &mut Vec<Violation>) {
    let norm = initial.norm();
    if !((norm - 1.0).abs() <= TOL_MACHINE) {
        out.push(Violation::Normalization { norm });
    }
}

fn check_unitaries(n: usize, names: &[char], unitaries: &[ComplexMatrix], out: &mut Vec<Violation>) {
    if unitaries.len() != names.len() {
        out.push(Violation::Shape { what: "unitaries", expected: names.len(), found: unitaries.len() });
    }
    for (u, &symbol) in unitaries.iter().zip(names) {
        if u.rows() != n || u.cols() != n {
            out.push(Violation::Shape { what: "unitary", expected: n, found: u.rows().max(u.cols()) });
            continue;
        }
        // square by the check above
        let defect = u.unitarity_defect().unwrap_or(f64::INFINITY);
        if !(defect <= TOL_MACHINE) {
            out.push(Violation::Unitarity { symbol, defect });
        }
    }
}

fn check_partition(n: usize, classes: &[(&'static str, &[usize])], out: &mut Vec<Violation>) {
    let mut seen = vec![false; n];
    for &(class, members) in classes {
        for &index in members {
            if index >= n {
                out.push(Violation::IndexOutOfRange { class, index });
            } else if core::mem::replace(&mut seen[index], true) {
                out.push(Violation::Overlap { index });
            }
        }
    }
    for (index, covered) in seen.into_iter().enumerate() {
        if !covered {
            out.push(Violation::Uncovered { index });
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_vector(n: usize, rng: &mut ChaCha8Rng) -> ComplexVector {
    let entries = (0..n).map(|_| gaussian(rng)).collect();
    ComplexVector::new(entries).expect("gaussian samples are finite")
}

/// Haar-distributed `n × n` unitary.
///
/// A complex Gaussian matrix is orthonormalized column by column. Gram-Schmidt
/// produces the QR factor with a positive real diagonal in `R`, which is
/// exactly the phase convention that makes `Q` Haar distributed.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut chacha = ChaCha8Rng::seed_from_u64(rng.random());
    loop {
        let mut frame = OrthoFrame::new(n);
        for _ in 0..n {
            let col = gaussian_vector(n, &mut chacha);
            if !frame.extend(&col, 1e-6).expect("dimensions agree") {
                break;
            }
        }
        if frame.is_full() {
            return ComplexMatrix::from_columns(frame.vectors()).expect("square");
        }
    }
}

/// Uniformly random unit vector supported on `support`.
fn random_unit_vector(n: usize, support: &[usize], rng: &mut ChaCha8Rng) -> ComplexVector {
    loop {
        let mut v = ComplexVector::zeros(n);
        for &i in support {
            v[i] = gaussian(rng);
        }
        let norm = v.norm();
        if norm > 1e-6 {
            return v.scale(Complex::new(1.0 / norm, 0.0));
        }
    }
}

fn check_states(n: usize) -> Result<()> {
    if n == 0 {
        Err(AutomatonError::NoStates)
    } else {
        Ok(())
    }
}

/// Random measure-once QFA; deterministic in `seed`.
///
/// Each state is accepting or rejecting with probability 1/2 (a class may be
/// empty), `|ψ₀⟩` is a random unit vector and every `U(σ)` is Haar.
pub fn gen_random_mo(n: usize, alphabet: &Alphabet, seed: u64) -> Result<MoQfa> {
    check_states(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut accepting, mut rejecting) = (Vec::new(), Vec::new());
    for q in 0..n {
        if rng.random_bool(0.5) {
            accepting.push(q);
        } else {
            rejecting.push(q);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let initial = random_unit_vector(n, &all, &mut rng);
    let unitaries = (0..alphabet.len()).map(|_| haar_unitary(n, &mut rng)).collect();
    MoQfa::new(alphabet.clone(), initial, unitaries, accepting, rejecting)
}

/// Random measure-many QFA; deterministic in `seed`.
///
/// States fall uniformly into accepting, rejecting or going, re-drawn until
/// at least one going state exists. `|ψ₀⟩` is a random unit vector on the
/// going states, and every `U(σ)`, end marker included, is Haar.
pub fn gen_random_mm(n: usize, alphabet: &Alphabet, seed: u64) -> Result<MmQfa> {
    check_states(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (accepting, rejecting, going) = loop {
        let (mut a, mut r, mut g) = (Vec::new(), Vec::new(), Vec::new());
        for q in 0..n {
            match rng.random_range(0..3u8) {
                0 => a.push(q),
                1 => r.push(q),
                _ => g.push(q),
            }
        }
        if !g.is_empty() {
            break (a, r, g);
        }
    };
    let initial = random_unit_vector(n, &going, &mut rng);
    let unitaries = (0..=alphabet.len()).map(|_| haar_unitary(n, &mut rng)).collect();
    MmQfa::new(alphabet.clone(), initial, unitaries, accepting, rejecting, going)
}

/// Random reversible automaton: uniform start state, a random shuffle per
/// symbol, each state accepting with probability 1/2.
pub fn gen_random_rfa(n: usize, alphabet: &Alphabet, seed: u64) -> Result<Rfa> {
    check_states(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = rng.random_range(0..n);
    let delta = (0..alphabet.len())
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let accepting = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    Rfa::new(n, initial, alphabet.clone(), delta, accepting)
}

/// Two-state machine over `{a}` rotating by `angle` per symbol, starting in
/// the accepting state `e₀`; `L(a^k) = cos²(k·angle)`.
pub fn rotation_mo(angle: f64) -> MoQfa {
    let (s, c) = (libm::sin(angle), libm::cos(angle));
    let u = ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).expect("2x2");
    MoQfa::new(
        Alphabet::from_chars("a").expect("valid alphabet"),
        ComplexVector::basis(2, 0),
        vec![u],
        vec![0],
        vec![1],
    )
    .expect("rotation is unitary")
}

/// Random unitary within roughly `size` (Frobenius) of the identity.
///
/// `I + εG` for a complex Gaussian `G` is orthonormalized, giving a unitary
/// close to `I`; `ε` is scaled so that `‖W − I‖_F ≈ size`.
pub fn near_identity_unitary<R: Rng + ?Sized>(n: usize, size: f64, rng: &mut R) -> ComplexMatrix {
    let mut chacha = ChaCha8Rng::seed_from_u64(rng.random());
    let mut eps = size / libm::sqrt((n * n) as f64).max(1.0);
    loop {
        let g: Vec<ComplexVector> = (0..n).map(|_| gaussian_vector(n, &mut chacha)).collect();
        let mut frame = OrthoFrame::new(n);
        for (j, col) in g.iter().enumerate() {
            let mut c = col.scale(Complex::new(eps, 0.0));
            c[j] += Complex::new(1.0, 0.0);
            frame.extend(&c, 1e-6).expect("dimensions agree");
        }
        if !frame.is_full() {
            continue;
        }
        let w = ComplexMatrix::from_columns(frame.vectors()).expect("square");
        let dist = w.sub(&ComplexMatrix::identity(n)).frobenius_norm();
        if dist >= size {
            return w;
        }
        if dist > 0.0 {
            eps *= 1.5 * size / dist;
        } else {
            eps *= 2.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use core::f64::consts::FRAC_PI_4;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn alphabet_rules() {
        assert_eq!(Alphabet::from_chars(""), Err(AutomatonError::EmptyAlphabet));
        assert_eq!(Alphabet::from_chars("aba"), Err(AutomatonError::DuplicateSymbol('a')));
        assert_eq!(Alphabet::from_chars("a$"), Err(AutomatonError::EndMarkerInAlphabet('$')));
        assert!(Alphabet::with_end_marker(vec!['a', '$'], '#').is_ok());
        assert_eq!(ab().encode("bab").unwrap(), vec![1, 0, 1]);
        assert_eq!(ab().encode_with_end("a$").unwrap(), vec![0, 2]);
        assert_eq!(ab().encode("ac"), Err(AutomatonError::UnknownSymbol('c')));
    }

    #[test]
    fn mo_empty_word_is_initial() {
        let m = gen_random_mo(3, &ab(), 5).unwrap();
        assert_eq!(&m.trajectory("").unwrap(), m.initial());
    }

    #[test]
    fn rotation_two_steps() {
        let m = rotation_mo(FRAC_PI_4);
        let v = m.trajectory("aa").unwrap();
        assert!(v.distance(&ComplexVector::from_real(&[0.0, 1.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn rotation_acceptance_closed_form() {
        let m = rotation_mo(FRAC_PI_4);
        assert!((m.accept_prob("a").unwrap() - 0.5).abs() < 1e-15);
        assert!(m.accept_prob("aa").unwrap().abs() < 1e-15);
        for k in 0..=8 {
            let w = "a".repeat(k);
            let expected = libm::cos(k as f64 * FRAC_PI_4).powi(2);
            assert!((m.accept_prob(&w).unwrap() - expected).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn single_accepting_state_always_accepts() {
        let a = Alphabet::from_chars("xy").unwrap();
        let m = MoQfa::new(
            a,
            ComplexVector::basis(1, 0),
            vec![ComplexMatrix::identity(1), ComplexMatrix::identity(1)],
            vec![0],
            vec![],
        )
        .unwrap();
        for w in ["", "x", "xyyx"] {
            assert_eq!(m.accept_prob(w).unwrap(), 1.0);
        }
    }

    #[test]
    fn mo_trajectory_matches_direct_product() {
        let m = gen_random_mo(4, &ab(), 11).unwrap();
        let direct = m.unitary('b').unwrap().mul(m.unitary('a').unwrap()).mul_vec(m.initial());
        let v = m.trajectory("ab").unwrap();
        assert!(v.distance(&direct) < 1e-14);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mo_unknown_symbol() {
        let m = rotation_mo(0.3);
        assert_eq!(m.trajectory("ab"), Err(AutomatonError::UnknownSymbol('b')));
        assert!(m.accept_prob("$").is_err());
    }

    #[test]
    fn mm_trajectory_projects_before_each_step() {
        let m = gen_random_mm(4, &ab(), 3).unwrap();
        let ua = m.unitary('a').unwrap();
        let ub = m.unitary('b').unwrap();
        let g = m.going();
        let direct = ub.mul_vec(&ua.mul_vec(&m.initial().project(g)).project(g));
        assert!(m.trajectory("ab").unwrap().distance(&direct) < 1e-14);
        assert_eq!(&m.trajectory("").unwrap(), m.initial());
    }

    #[test]
    fn mm_all_going_matches_mo_product() {
        let a = ab();
        let mo = gen_random_mo(3, &a, 8).unwrap();
        let mut us = mo.unitaries().to_vec();
        us.push(ComplexMatrix::identity(3));
        let mm = MmQfa::new(a, mo.initial().clone(), us, vec![], vec![], vec![0, 1, 2]).unwrap();
        for w in ["", "a", "ba", "abba"] {
            assert!(mm.trajectory(w).unwrap().distance(&mo.trajectory(w).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn mm_accepting_start_with_identity_end() {
        let a = Alphabet::from_chars("a").unwrap();
        let m = MmQfa::new(
            a,
            ComplexVector::basis(2, 0),
            vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)],
            vec![0],
            vec![],
            vec![1],
        )
        .unwrap();
        assert_eq!(m.accept_prob("").unwrap(), 1.0);
    }

    #[test]
    fn mm_without_accepting_states_never_accepts() {
        let a = ab();
        let base = gen_random_mm(3, &a, 2).unwrap();
        let m = MmQfa::new(
            a,
            base.initial().clone(),
            base.unitaries().to_vec(),
            vec![],
            vec![0],
            vec![1, 2],
        )
        .unwrap();
        for w in ["", "a", "abab", "bbb"] {
            assert_eq!(m.accept_prob(w).unwrap(), 0.0);
        }
    }

    #[test]
    fn rfa_cyclic_fold() {
        let a = Alphabet::from_chars("a").unwrap();
        let g = Rfa::new(2, 0, a, vec![vec![1, 0]], vec![1]).unwrap();
        assert_eq!(g.run("").unwrap(), 0);
        assert_eq!(g.run("aaa").unwrap(), 1);
        assert!(g.accepts("a").unwrap());
        assert!(!g.accepts("aa").unwrap());
    }

    #[test]
    fn rfa_rejects_non_bijection() {
        let a = Alphabet::from_chars("a").unwrap();
        let err = Rfa::new(2, 0, a, vec![vec![0, 0]], vec![]).unwrap_err();
        assert_eq!(err, AutomatonError::Invalid(vec![Violation::NotPermutation { symbol: 'a' }]));
    }

    #[test]
    fn identity_rfa_embeds_as_identities() {
        let a = ab();
        let g = Rfa::new(3, 1, a, vec![vec![0, 1, 2], vec![0, 1, 2]], vec![1]).unwrap();
        let m = g.to_mo();
        for u in m.unitaries() {
            assert_eq!(u, &ComplexMatrix::identity(3));
        }
        assert_eq!(m.rejecting(), &[0, 2]);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = ab();
        assert_eq!(gen_random_mo(5, &a, 9).unwrap(), gen_random_mo(5, &a, 9).unwrap());
        assert_eq!(gen_random_mm(5, &a, 9).unwrap(), gen_random_mm(5, &a, 9).unwrap());
        assert_eq!(gen_random_rfa(5, &a, 9).unwrap(), gen_random_rfa(5, &a, 9).unwrap());
        assert_ne!(gen_random_mo(5, &a, 9).unwrap(), gen_random_mo(5, &a, 10).unwrap());
    }

    #[test]
    fn generated_unitaries_are_unitary() {
        for seed in 0..10 {
            let m = gen_random_mm(1 + seed as usize % 7, &ab(), seed).unwrap();
            for u in m.unitaries() {
                assert!(u.unitarity_defect().unwrap() <= 1e-10);
            }
            assert!(!m.going().is_empty());
            assert!((m.initial().weight_on(m.going()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_states_rejected() {
        assert_eq!(gen_random_mo(0, &ab(), 0), Err(AutomatonError::NoStates));
        assert_eq!(gen_random_mm(0, &ab(), 0), Err(AutomatonError::NoStates));
        assert_eq!(gen_random_rfa(0, &ab(), 0), Err(AutomatonError::NoStates));
    }

    #[test]
    fn near_identity_has_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            let w = near_identity_unitary(n, 1e-2, &mut rng);
            let d = w.sub(&ComplexMatrix::identity(n)).frobenius_norm();
            assert!((1e-2..0.1).contains(&d), "n = {n}, d = {d}");
            assert!(w.unitarity_defect().unwrap() < 1e-12);
        }
    }

    #[test]
    fn violation_messages() {
        let v = Violation::Normalization { norm: 0.9 };
        assert!(v.to_string().starts_with("normalization"));
    }
}
