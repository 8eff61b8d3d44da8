mod common;

use std::collections::BTreeSet;

use common::{algebra_over, shipped_named};
use proptest::prelude::*;
use ualg_core::clone::{clone_n, DEFAULT_CLONE_BUDGET};
use ualg_core::{eval_term, FiniteAlgebra};

/// Distinct n-ary term tables reachable by terms of depth at most `depth`,
/// built level by level from the projections.
fn term_tables(alg: &FiniteAlgebra, n: usize, depth: usize) -> Vec<BTreeSet<Vec<usize>>> {
    let k = alg.size();
    let rows: Vec<Vec<usize>> = (0..k.pow(n as u32))
        .map(|mut c| {
            let mut t = vec![0; n];
            for slot in t.iter_mut().rev() {
                *slot = c % k;
                c /= k;
            }
            t
        })
        .collect();
    let mut levels: Vec<BTreeSet<Vec<usize>>> =
        vec![(0..n).map(|i| rows.iter().map(|r| r[i]).collect()).collect()];
    for _ in 0..depth {
        let known: Vec<Vec<usize>> = levels.last().unwrap().iter().cloned().collect();
        let mut next: BTreeSet<Vec<usize>> = known.iter().cloned().collect();
        for s in 0..alg.signature().len() {
            let a = alg.arity(s);
            for mut pick in 0..known.len().pow(a as u32) {
                let mut args = Vec::with_capacity(a);
                for _ in 0..a {
                    args.push(&known[pick % known.len()]);
                    pick /= known.len();
                }
                let table: Vec<usize> =
                    (0..rows.len()).map(|r| alg.apply(s, &args.iter().map(|t| t[r]).collect::<Vec<_>>())).collect();
                next.insert(table);
            }
        }
        levels.push(next);
    }
    levels
}

fn agrees_with_terms(alg: &FiniteAlgebra, n: usize) -> Result<(), TestCaseError> {
    let c = clone_n(alg, n, DEFAULT_CLONE_BUDGET).unwrap();
    prop_assert!(c.complete);
    let levels = term_tables(alg, n, 4);
    let got: BTreeSet<Vec<usize>> = c.members.iter().map(|m| m.table.clone()).collect();
    prop_assert_eq!(got.len(), c.len(), "duplicate tables");
    prop_assert!(levels[4].is_subset(&got));
    if levels[3] == levels[4] {
        prop_assert_eq!(&levels[4], &got);
    }
    let k = alg.size();
    for m in &c.members {
        for (r, &v) in m.table.iter().enumerate() {
            let mut binding = vec![0; n];
            let mut code = r;
            for slot in binding.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            prop_assert_eq!(eval_term(alg, &m.witness, &binding).unwrap(), v);
        }
    }
    Ok(())
}

#[test]
fn lattice_and_boolean_counts() {
    let l2 = shipped_named("L2");
    assert_eq!(clone_n(&l2, 1, DEFAULT_CLONE_BUDGET).unwrap().len(), 1);
    assert_eq!(clone_n(&l2, 2, DEFAULT_CLONE_BUDGET).unwrap().len(), 4);
    assert_eq!(clone_n(&shipped_named("B"), 1, DEFAULT_CLONE_BUDGET).unwrap().len(), 4);
    agrees_with_terms(&l2, 3).unwrap();
}

const BINARY: &[(&str, usize)] = &[("m", 2)];
const MIXED: &[(&str, usize)] = &[("c", 0), ("f", 1), ("m", 2)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn binary_on_two_elements(alg in algebra_over(BINARY, 2..=2), n in 1usize..=2) {
        agrees_with_terms(&alg, n)?;
    }

    #[test]
    fn mixed_unary_fragment(alg in algebra_over(MIXED, 1..=3)) {
        agrees_with_terms(&alg, 1)?;
    }
}
