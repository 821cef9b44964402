//! Amplitude-distribution (AD) oracles.
//!
//! An [`AdOracle`] answers, for an input string, the exact state vector the
//! hidden machine reaches on it. Learners only ever see this interface. The
//! simulated oracles here wrap a hidden machine, memoize replies and count
//! queries.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::automata::{Alphabet, AutomatonError, MmQfa, MoQfa, Rfa};
use crate::linalg::ComplexVector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("illegal query {query:?}: {reason}")]
    IllegalQueryString { query: String, reason: String },
}

impl OracleError {
    fn illegal(query: &str, reason: impl ToString) -> Self {
        OracleError::IllegalQueryString { query: query.to_string(), reason: reason.to_string() }
    }
}

pub type Result<T> = core::result::Result<T, OracleError>;

/// Teacher answering full amplitude distributions.
///
/// Replies are deterministic and the counters never decrease. `distinct`
/// counts different strings asked, `raw` counts every call.
pub trait AdOracle {
    fn query(&mut self, x: &str) -> Result<ComplexVector>;
    fn dim(&self) -> usize;
    fn alphabet(&self) -> &Alphabet;
    fn distinct_queries(&self) -> u64;
    fn raw_queries(&self) -> u64;
}

impl<O: AdOracle + ?Sized> AdOracle for &mut O {
    fn query(&mut self, x: &str) -> Result<ComplexVector> {
        (**self).query(x)
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn distinct_queries(&self) -> u64 {
        (**self).distinct_queries()
    }
    fn raw_queries(&self) -> u64 {
        (**self).raw_queries()
    }
}

/// A machine that can stand behind a simulated oracle.
pub trait HiddenMachine {
    /// The trajectory vector for a legal query string.
    fn reply(&self, x: &str) -> Result<ComplexVector>;
    fn dim(&self) -> usize;
    fn alphabet(&self) -> &Alphabet;
}

fn map_symbol_error(x: &str, e: AutomatonError) -> OracleError {
    OracleError::illegal(x, e)
}

impl HiddenMachine for MoQfa {
    fn reply(&self, x: &str) -> Result<ComplexVector> {
        self.trajectory(x).map_err(|e| map_symbol_error(x, e))
    }
    fn dim(&self) -> usize {
        self.n()
    }
    fn alphabet(&self) -> &Alphabet {
        MoQfa::alphabet(self)
    }
}

impl HiddenMachine for MmQfa {
    /// Legal strings are `Σ*` and `Σ*$`.
    fn reply(&self, x: &str) -> Result<ComplexVector> {
        let end = MmQfa::alphabet(self).end_marker();
        let body = x.strip_suffix(end).unwrap_or(x);
        if body.contains(end) {
            return Err(OracleError::illegal(x, "end marker is only allowed in final position"));
        }
        self.trajectory(x).map_err(|e| map_symbol_error(x, e))
    }
    fn dim(&self) -> usize {
        self.n()
    }
    fn alphabet(&self) -> &Alphabet {
        MmQfa::alphabet(self)
    }
}

impl HiddenMachine for Rfa {
    fn reply(&self, x: &str) -> Result<ComplexVector> {
        let s = self.run(x).map_err(|e| map_symbol_error(x, e))?;
        Ok(ComplexVector::basis(self.states(), s))
    }
    fn dim(&self) -> usize {
        self.states()
    }
    fn alphabet(&self) -> &Alphabet {
        Rfa::alphabet(self)
    }
}

/// Memoizing oracle backed by a hidden machine.
#[derive(Debug, Clone)]
pub struct SimulatedOracle<M> {
    target: M,
    cache: BTreeMap<String, ComplexVector>,
    raw: u64,
}

pub type SimulatedMoOracle = SimulatedOracle<MoQfa>;
pub type SimulatedMmOracle = SimulatedOracle<MmQfa>;
pub type SimulatedRfaOracle = SimulatedOracle<Rfa>;

impl<M: HiddenMachine> SimulatedOracle<M> {
    pub fn new(target: M) -> Self {
        SimulatedOracle { target, cache: BTreeMap::new(), raw: 0 }
    }

    /// Strings asked so far, in lexicographic order.
    pub fn asked(&self) -> Vec<&str> {
        self.cache.keys().map(String::as_str).collect()
    }
}

impl<M: HiddenMachine> AdOracle for SimulatedOracle<M> {
    fn query(&mut self, x: &str) -> Result<ComplexVector> {
        if let Some(v) = self.cache.get(x) {
            self.raw += 1;
            return Ok(v.clone());
        }
        let v = self.target.reply(x)?;
        self.raw += 1;
        self.cache.insert(x.to_string(), v.clone());
        Ok(v)
    }

    fn dim(&self) -> usize {
        self.target.dim()
    }

    fn alphabet(&self) -> &Alphabet {
        self.target.alphabet()
    }

    fn distinct_queries(&self) -> u64 {
        self.cache.len() as u64
    }

    fn raw_queries(&self) -> u64 {
        self.raw
    }
}

/// The weaker accepting-amplitudes (AA) oracle, shown as a projection of an
/// AD oracle onto the accepting coordinates. No learner uses it: this
/// information alone does not support polynomial learning.
pub struct AcceptingAmplitudes<O> {
    inner: O,
    accepting: Vec<usize>,
}

impl<O: AdOracle> AcceptingAmplitudes<O> {
    pub fn new(inner: O, accepting: Vec<usize>) -> Self {
        AcceptingAmplitudes { inner, accepting }
    }

    /// Amplitudes of the accepting states, in index order.
    pub fn query(&mut self, x: &str) -> Result<Vec<crate::linalg::Complex>> {
        let v = self.inner.query(x)?;
        Ok(self.accepting.iter().map(|&i| v[i]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{gen_random_mm, gen_random_mo, gen_random_rfa};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn empty_query_returns_initial_state() {
        let m = gen_random_mo(3, &ab(), 1).unwrap();
        let psi0 = m.initial().clone();
        let mut o = SimulatedOracle::new(m);
        assert_eq!(o.query("").unwrap(), psi0);
    }

    #[test]
    fn mm_end_marker_query() {
        let m = gen_random_mm(4, &ab(), 2).unwrap();
        let expected = m.end_unitary().mul_vec(&m.initial().project(m.going()));
        let mut o = SimulatedOracle::new(m);
        assert!(o.query("$").unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn mm_rejects_interior_end_marker() {
        let mut o = SimulatedOracle::new(gen_random_mm(2, &ab(), 2).unwrap());
        assert!(o.query("a$b").is_err());
        assert!(o.query("$$").is_err());
        assert!(o.query("ab$").is_ok());
        assert!(o.query("ac").is_err());
        assert_eq!(o.raw_queries(), 1);
    }

    #[test]
    fn mo_rejects_end_marker() {
        let mut o = SimulatedOracle::new(gen_random_mo(2, &ab(), 2).unwrap());
        assert!(matches!(o.query("a$"), Err(OracleError::IllegalQueryString { .. })));
    }

    #[test]
    fn rfa_replies_are_basis_vectors() {
        let mut o = SimulatedOracle::new(gen_random_rfa(5, &ab(), 4).unwrap());
        for x in ["", "a", "ab", "bba", "abab"] {
            let v = o.query(x).unwrap();
            let ones = v.iter().filter(|c| **c == crate::linalg::ONE).count();
            let zeros = v.iter().filter(|c| **c == crate::linalg::ZERO).count();
            assert_eq!((ones, zeros), (1, 4));
        }
    }

    #[test]
    fn counters() {
        let mut o = SimulatedOracle::new(gen_random_mo(2, &ab(), 0).unwrap());
        assert_eq!((o.distinct_queries(), o.raw_queries()), (0, 0));
        let first = o.query("").unwrap();
        let second = o.query("").unwrap();
        assert_eq!(first, second);
        assert_eq!((o.distinct_queries(), o.raw_queries()), (1, 2));
        o.query("ab").unwrap();
        assert_eq!((o.distinct_queries(), o.raw_queries()), (2, 3));
        assert_eq!(o.asked(), vec!["", "ab"]);
    }

    #[test]
    fn accepting_amplitudes_projection() {
        let m = gen_random_mo(4, &ab(), 6).unwrap();
        let acc = m.accepting().to_vec();
        let full = m.trajectory("ba").unwrap();
        let mut aa = AcceptingAmplitudes::new(SimulatedOracle::new(m), acc.clone());
        let part = aa.query("ba").unwrap();
        assert_eq!(part, acc.iter().map(|&i| full[i]).collect::<Vec<_>>());
    }
}
