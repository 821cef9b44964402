//! Machine semantics against independent evaluations.

use qfa_core::automata::{gen_random_mm, gen_random_mo, gen_random_rfa, MmQfa};
use qfa_core::linalg::{ComplexMatrix, ComplexVector, ONE};
use qfa_core::oracle::{AdOracle, SimulatedOracle};
use qfa_core::verify::{test_words, VerifyConfig};
use qfa_core::Alphabet;

fn all_words(alphabet: &Alphabet, max_len: usize) -> Vec<String> {
    let cfg = VerifyConfig { max_exhaustive_len: max_len, random_trials: 0, ..VerifyConfig::default() };
    test_words(alphabet.len(), &cfg)
        .into_iter()
        .map(|w| w.into_iter().map(|k| alphabet.symbols()[k]).collect())
        .collect()
}

fn projector(n: usize, indices: &[usize]) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(n, n);
    for &i in indices {
        p[(i, i)] = ONE;
    }
    p
}

/// Measure-many acceptance evaluated term by term with explicit matrix products: the k-th
/// term is ‖P(a) U(x_{k+1}) P(g)U(x_k) ··· P(g)U(x_1) |ψ₀⟩‖² with x = w$.
fn term_by_term(m: &MmQfa, w: &str, classes: &[usize]) -> Vec<f64> {
    let n = m.n();
    let x: Vec<char> = w.chars().chain([m.alphabet().end_marker()]).collect();
    let pg = projector(n, m.going());
    let pc = projector(n, classes);
    (0..x.len())
        .map(|k| {
            let mut prod = ComplexMatrix::identity(n);
            for &s in &x[..k] {
                prod = pg.mul(m.unitary(s).unwrap()).mul(&prod);
            }
            let term = pc.mul(m.unitary(x[k]).unwrap()).mul(&prod);
            term.mul_vec(m.initial()).norm_sqr()
        })
        .collect()
}

#[test]
fn mo_probability_matches_matrix_product() {
    let a = Alphabet::from_chars("abc").unwrap();
    for seed in 0..10 {
        let m = gen_random_mo(1 + seed as usize % 5, &a, seed).unwrap();
        for w in all_words(&a, 3) {
            let mut us = ComplexMatrix::identity(m.n());
            for s in w.chars() {
                us = m.unitary(s).unwrap().mul(&us);
            }
            let v = us.mul_vec(m.initial());
            let brute: f64 = m.accepting().iter().map(|&i| v[i].norm_sqr()).sum();
            assert!((m.accept_prob(&w).unwrap() - brute).abs() < 1e-12);
            let t = m.trajectory(&w).unwrap();
            assert!(t.distance(&v) < 1e-12);
            assert!((t.norm() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn mm_probabilities_match_term_by_term_sum() {
    let a = Alphabet::from_chars("ab").unwrap();
    for seed in 0..15 {
        let m = gen_random_mm(1 + seed as usize % 6, &a, seed).unwrap();
        for w in all_words(&a, 4) {
            let acc_terms = term_by_term(&m, &w, m.accepting());
            let rej_terms = term_by_term(&m, &w, m.rejecting());
            let (acc, rej) = m.probabilities(&w).unwrap();
            assert!((acc - acc_terms.iter().sum::<f64>()).abs() < 1e-12, "seed {seed} w {w:?}");
            assert!((rej - rej_terms.iter().sum::<f64>()).abs() < 1e-12);
            assert!(acc + rej <= 1.0 + 1e-9);
            // partial sums only ever grow
            let mut partial = 0.0;
            for t in acc_terms {
                assert!(t >= 0.0);
                partial += t;
            }
            assert!(partial <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn mm_projection_never_increases_norm() {
    let a = Alphabet::from_chars("ab").unwrap();
    for seed in 0..10 {
        let m = gen_random_mm(2 + seed as usize % 5, &a, seed).unwrap();
        for x in all_words(&a, 4) {
            let base = m.trajectory(&x).unwrap().norm();
            for s in ['a', 'b', '$'] {
                let ext = format!("{x}{s}");
                assert!(m.trajectory(&ext).unwrap().norm() <= base + 1e-12);
            }
        }
    }
}

#[test]
fn rfa_embedding_is_exact() {
    for seed in 0..20u64 {
        let a = Alphabet::latin(1 + seed as usize % 3).unwrap();
        let g = gen_random_rfa(1 + seed as usize % 6, &a, seed).unwrap();
        let m = g.to_mo();
        for u in m.unitaries() {
            assert_eq!(u.unitarity_defect().unwrap(), 0.0);
        }
        for w in all_words(&a, 6) {
            let expected = if g.accepts(&w).unwrap() { 1.0 } else { 0.0 };
            assert_eq!(m.accept_prob(&w).unwrap(), expected);
        }
    }
}

#[test]
fn rfa_run_composes() {
    let a = Alphabet::from_chars("ab").unwrap();
    let g = gen_random_rfa(6, &a, 17).unwrap();
    for u in all_words(&a, 3) {
        for v in all_words(&a, 3) {
            let mid = g.run(&u).unwrap();
            assert_eq!(g.run(&format!("{u}{v}")).unwrap(), g.run_from(mid, &v).unwrap());
        }
    }
}

#[test]
fn mo_oracle_extends_by_one_unitary() {
    let a = Alphabet::from_chars("ab").unwrap();
    let m = gen_random_mo(5, &a, 21).unwrap();
    let mut o = SimulatedOracle::new(m.clone());
    for x in all_words(&a, 3) {
        let base = o.query(&x).unwrap();
        for s in ['a', 'b'] {
            let ext = o.query(&format!("{x}{s}")).unwrap();
            assert!(ext.distance(&m.unitary(s).unwrap().mul_vec(&base)) <= 1e-12);
        }
    }
}

#[test]
fn mm_oracle_extends_by_projected_unitary() {
    let a = Alphabet::from_chars("ab").unwrap();
    let m = gen_random_mm(5, &a, 22).unwrap();
    let mut o = SimulatedOracle::new(m.clone());
    for x in all_words(&a, 3) {
        let base: ComplexVector = o.query(&x).unwrap().project(m.going());
        for s in ['a', 'b', '$'] {
            let ext = o.query(&format!("{x}{s}")).unwrap();
            assert!(ext.distance(&m.unitary(s).unwrap().mul_vec(&base)) <= 1e-12);
        }
    }
}
