//! Automaton JSON files.
//!
//! ```json
//! { "kind": "mo", "n": 2, "alphabet": ["a"],
//!   "initial": [[1.0, 0.0], [0.0, 0.0]],
//!   "unitaries": { "a": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]] },
//!   "accepting": [0], "rejecting": [1] }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major lists of
//! rows. Measure-many files add `end_marker` (default `"$"`), a unitary for
//! the end marker and `going`. Reversible automata use an integer `initial`,
//! `delta` (symbol to permutation list) and `accepting` only.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qfa_core::automata::DEFAULT_END_MARKER;
use qfa_core::{
    Alphabet, AutomatonError, Complex, ComplexMatrix, ComplexVector, Machine, MmQfa, MoQfa, Rfa,
};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Invalid(msg.into()))
}

type Pair = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Initial {
    Index(usize),
    Vector(Vec<Pair>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonFile {
    kind: String,
    n: usize,
    alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end_marker: Option<String>,
    initial: Initial,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unitaries: Option<BTreeMap<String, Vec<Vec<Pair>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<BTreeMap<String, Vec<usize>>>,
    accepting: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rejecting: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    going: Option<Vec<usize>>,
}

fn pair(c: &Complex) -> Pair {
    [c.re, c.im]
}

fn vector_pairs(v: &ComplexVector) -> Vec<Pair> {
    v.iter().map(pair).collect()
}

fn matrix_pairs(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(pair).collect()).collect()
}

fn symbol_strings(a: &Alphabet) -> Vec<String> {
    a.symbols().iter().map(|c| c.to_string()).collect()
}

fn to_file(machine: &Machine) -> AutomatonFile {
    match machine {
        Machine::Mo(m) => AutomatonFile {
            kind: "mo".into(),
            n: m.n(),
            alphabet: symbol_strings(m.alphabet()),
            end_marker: None,
            initial: Initial::Vector(vector_pairs(m.initial())),
            unitaries: Some(
                m.alphabet()
                    .symbols()
                    .iter()
                    .zip(m.unitaries())
                    .map(|(s, u)| (s.to_string(), matrix_pairs(u)))
                    .collect(),
            ),
            delta: None,
            accepting: m.accepting().to_vec(),
            rejecting: Some(m.rejecting().to_vec()),
            going: None,
        },
        Machine::Mm(m) => {
            let a = m.alphabet();
            let names = a.symbols().iter().copied().chain([a.end_marker()]);
            AutomatonFile {
                kind: "mm".into(),
                n: m.n(),
                alphabet: symbol_strings(a),
                end_marker: Some(a.end_marker().to_string()),
                initial: Initial::Vector(vector_pairs(m.initial())),
                unitaries: Some(
                    names.zip(m.unitaries()).map(|(s, u)| (s.to_string(), matrix_pairs(u))).collect(),
                ),
                delta: None,
                accepting: m.accepting().to_vec(),
                rejecting: Some(m.rejecting().to_vec()),
                going: Some(m.going().to_vec()),
            }
        }
        Machine::Rfa(g) => AutomatonFile {
            kind: "rfa".into(),
            n: g.states(),
            alphabet: symbol_strings(g.alphabet()),
            end_marker: None,
            initial: Initial::Index(g.initial()),
            unitaries: None,
            delta: Some(
                g.alphabet()
                    .symbols()
                    .iter()
                    .zip(g.delta())
                    .map(|(s, p)| (s.to_string(), p.clone()))
                    .collect(),
            ),
            accepting: g.accepting().to_vec(),
            rejecting: None,
            going: None,
        },
    }
}

/// Serializes a machine as pretty-printed JSON with a trailing newline.
pub fn to_json(machine: &Machine) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(machine)).expect("automaton files serialize");
    s.push('\n');
    s
}

fn single_char(s: &str, what: &str) -> Result<char, FormatError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => invalid(format!("{what} {s:?} must be a single character")),
    }
}

fn sorted_indices(list: &[usize], what: &str) -> Result<Vec<usize>, FormatError> {
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return invalid(format!("{what} must be a strictly increasing list"));
    }
    Ok(list.to_vec())
}

fn complex_vector(pairs: &[Pair], n: usize) -> Result<ComplexVector, FormatError> {
    if pairs.len() != n {
        return invalid(format!("initial vector has {} entries, expected {n}", pairs.len()));
    }
    ComplexVector::new(pairs.iter().map(|p| Complex::new(p[0], p[1])).collect())
        .map_err(|e| FormatError::Invalid(format!("initial vector: {e}")))
}

fn complex_matrix(rows: &[Vec<Pair>], n: usize, symbol: &str) -> Result<ComplexMatrix, FormatError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return invalid(format!("unitary for {symbol:?} must be {n}x{n}"));
    }
    let data = rows.iter().flatten().map(|p| Complex::new(p[0], p[1])).collect();
    ComplexMatrix::from_row_major(n, n, data)
        .map_err(|e| FormatError::Invalid(format!("unitary for {symbol:?}: {e}")))
}

fn forbid<T>(field: &Option<T>, name: &str, kind: &str) -> Result<(), FormatError> {
    if field.is_some() {
        return invalid(format!("field {name:?} is not allowed for kind {kind:?}"));
    }
    Ok(())
}

fn require<'a, T>(field: &'a Option<T>, name: &str, kind: &str) -> Result<&'a T, FormatError> {
    field.as_ref().ok_or_else(|| FormatError::Invalid(format!("kind {kind:?} requires field {name:?}")))
}

/// Looks up one matrix per name, rejecting missing or extra keys.
fn unitaries_for(
    map: &BTreeMap<String, Vec<Vec<Pair>>>,
    names: &[char],
    n: usize,
) -> Result<Vec<ComplexMatrix>, FormatError> {
    if map.len() != names.len() {
        return invalid(format!("expected {} unitaries, found {}", names.len(), map.len()));
    }
    names
        .iter()
        .map(|c| {
            let key = c.to_string();
            let rows = map
                .get(&key)
                .ok_or_else(|| FormatError::Invalid(format!("missing unitary for {key:?}")))?;
            complex_matrix(rows, n, &key)
        })
        .collect()
}

fn from_file(f: AutomatonFile) -> Result<Machine, FormatError> {
    if f.n == 0 {
        return invalid("n must be at least 1");
    }
    let symbols = f
        .alphabet
        .iter()
        .map(|s| single_char(s, "alphabet symbol"))
        .collect::<Result<Vec<_>, _>>()?;
    let accepting = sorted_indices(&f.accepting, "accepting")?;
    let kind = f.kind.as_str();
    match kind {
        "mo" => {
            forbid(&f.end_marker, "end_marker", kind)?;
            forbid(&f.delta, "delta", kind)?;
            forbid(&f.going, "going", kind)?;
            let alphabet = Alphabet::new(symbols)?;
            let Initial::Vector(init) = &f.initial else {
                return invalid("initial must be a list of [re, im] pairs");
            };
            let initial = complex_vector(init, f.n)?;
            let unitaries = unitaries_for(require(&f.unitaries, "unitaries", kind)?, alphabet.symbols(), f.n)?;
            let rejecting = sorted_indices(require(&f.rejecting, "rejecting", kind)?, "rejecting")?;
            Ok(Machine::Mo(MoQfa::new(alphabet, initial, unitaries, accepting, rejecting)?))
        }
        "mm" => {
            forbid(&f.delta, "delta", kind)?;
            let end = match &f.end_marker {
                Some(s) => single_char(s, "end marker")?,
                None => DEFAULT_END_MARKER,
            };
            let alphabet = Alphabet::with_end_marker(symbols, end)?;
            let Initial::Vector(init) = &f.initial else {
                return invalid("initial must be a list of [re, im] pairs");
            };
            let initial = complex_vector(init, f.n)?;
            let mut names = alphabet.symbols().to_vec();
            names.push(end);
            let unitaries = unitaries_for(require(&f.unitaries, "unitaries", kind)?, &names, f.n)?;
            let rejecting = sorted_indices(require(&f.rejecting, "rejecting", kind)?, "rejecting")?;
            let going = sorted_indices(require(&f.going, "going", kind)?, "going")?;
            Ok(Machine::Mm(MmQfa::new(alphabet, initial, unitaries, accepting, rejecting, going)?))
        }
        "rfa" => {
            forbid(&f.end_marker, "end_marker", kind)?;
            forbid(&f.unitaries, "unitaries", kind)?;
            forbid(&f.rejecting, "rejecting", kind)?;
            forbid(&f.going, "going", kind)?;
            let alphabet = Alphabet::new(symbols)?;
            let Initial::Index(initial) = f.initial else {
                return invalid("initial must be a state index for kind \"rfa\"");
            };
            let map = require(&f.delta, "delta", kind)?;
            if map.len() != alphabet.len() {
                return invalid(format!("expected {} permutations, found {}", alphabet.len(), map.len()));
            }
            let delta = alphabet
                .symbols()
                .iter()
                .map(|c| {
                    map.get(&c.to_string())
                        .cloned()
                        .ok_or_else(|| FormatError::Invalid(format!("missing delta for {c:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Machine::Rfa(Rfa::new(f.n, initial, alphabet, delta, accepting)?))
        }
        other => invalid(format!("unknown kind {other:?} (expected mo, mm or rfa)")),
    }
}

/// Parses and validates an automaton document.
pub fn from_json(text: &str) -> Result<Machine, FormatError> {
    from_file(serde_json::from_str(text)?)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
}

pub fn load(path: &Path) -> Result<Machine, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    from_json(&text).map_err(|source| LoadError::Format { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfa_core::automata::{gen_random_mm, gen_random_mo, gen_random_rfa, rotation_mo};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let machines = [
            Machine::Mo(gen_random_mo(4, &ab(), 42).unwrap()),
            Machine::Mm(gen_random_mm(3, &ab(), 7).unwrap()),
            Machine::Rfa(gen_random_rfa(5, &ab(), 1).unwrap()),
            Machine::Mo(rotation_mo(0.25 * std::f64::consts::PI)),
        ];
        for m in machines {
            let text = to_json(&m);
            let back = from_json(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn mm_end_marker_defaults_to_dollar() {
        let m = Machine::Mm(gen_random_mm(2, &ab(), 3).unwrap());
        let mut v: serde_json::Value = serde_json::from_str(&to_json(&m)).unwrap();
        v.as_object_mut().unwrap().remove("end_marker");
        assert_eq!(from_json(&v.to_string()).unwrap(), m);
    }

    fn mutate(m: &Machine, f: impl FnOnce(&mut serde_json::Value)) -> Result<Machine, FormatError> {
        let mut v: serde_json::Value = serde_json::from_str(&to_json(m)).unwrap();
        f(&mut v);
        from_json(&v.to_string())
    }

    #[test]
    fn rejects_invariant_violations() {
        let m = Machine::Mo(gen_random_mo(3, &ab(), 9).unwrap());
        assert!(mutate(&m, |v| v["initial"][0][0] = 5.0.into()).is_err());
        assert!(mutate(&m, |v| v["unitaries"]["a"][0][0][0] = 5.0.into()).is_err());
        assert!(mutate(&m, |v| v["accepting"] = serde_json::json!([1, 0])).is_err());
        assert!(mutate(&m, |v| v["alphabet"] = serde_json::json!(["ab", "c"])).is_err());
        assert!(mutate(&m, |v| v["kind"] = "nfa".into()).is_err());
        assert!(mutate(&m, |v| v["going"] = serde_json::json!([])).is_err());
        assert!(mutate(&m, |v| v["n"] = 4.into()).is_err());
        assert!(mutate(&m, |v| {
            v["unitaries"].as_object_mut().unwrap().remove("b");
        })
        .is_err());

        let g = Machine::Rfa(gen_random_rfa(3, &ab(), 9).unwrap());
        assert!(mutate(&g, |v| v["delta"]["a"] = serde_json::json!([0, 0, 1])).is_err());
        assert!(mutate(&g, |v| v["initial"] = 3.into()).is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(from_json("{ not json"), Err(FormatError::Json(_))));
        assert!(from_json("{}").is_err());
    }
}
