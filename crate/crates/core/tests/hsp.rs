mod common;

use std::sync::Arc;

use common::{algebra_over, shipped};
use proptest::prelude::*;
use ualg_core::generation::subuniverses;
use ualg_core::morphism::{homomorphisms, DEFAULT_SEARCH_BUDGET};
use ualg_core::presets::preset;
use ualg_core::product::{direct_product, Naming};
use ualg_core::{satisfies_all, EquationSet, FiniteAlgebra};

const PRESETS: [&str; 7] =
    ["group", "abelian-group", "semigroup", "ring", "lattice", "boolean-algebra", "vector-space(2)"];

fn member(alg: &FiniteAlgebra, eqs: &EquationSet) -> Option<bool> {
    satisfies_all(alg, eqs).ok().map(|r| r.member)
}

/// Subalgebras, homomorphic images and binary products of members are members.
fn hsp_closed(algs: &[Arc<FiniteAlgebra>], eqs: &EquationSet) -> Result<(), String> {
    let members: Vec<&Arc<FiniteAlgebra>> = algs.iter().filter(|a| member(a, eqs) == Some(true)).collect();
    for a in &members {
        for s in subuniverses(a, a.size()).unwrap().into_iter().filter(|s| !s.is_empty()) {
            let sub = a.restrict(&s, "S").unwrap();
            if member(&sub, eqs) != Some(true) {
                return Err(format!("{}: subalgebra {s:?} leaves {}", a.name(), eqs.name));
            }
        }
        for b in algs.iter().filter(|b| b.signature().same_symbols(a.signature())) {
            for h in homomorphisms(a, b, DEFAULT_SEARCH_BUDGET).unwrap() {
                let img = b.restrict(&h.image(), "H").unwrap();
                if member(&img, eqs) != Some(true) {
                    return Err(format!("image of {} in {} leaves {}", a.name(), b.name(), eqs.name));
                }
            }
        }
        for b in &members {
            if !b.signature().same_symbols(a.signature()) {
                continue;
            }
            let p = direct_product(&[(*a).clone(), (*b).clone()], Naming::Prefix("p".into()), "P").unwrap();
            if member(&p.product, eqs) != Some(true) {
                return Err(format!("{} x {} leaves {}", a.name(), b.name(), eqs.name));
            }
        }
    }
    Ok(())
}

#[test]
fn shipped_algebras_are_hsp_closed() {
    let algs: Vec<_> = shipped().into_iter().filter(|a| a.size() <= 4).collect();
    for name in PRESETS {
        hsp_closed(&algs, &preset(name).unwrap()).unwrap();
    }
}

#[test]
fn missing_symbols_are_reported() {
    let sl2 = common::shipped_named("SL2");
    let err = satisfies_all(&sl2, &preset("group").unwrap()).unwrap_err().to_string();
    assert!(err.contains("inv/1"), "{err}");
}

const MAGMA: &[(&str, usize)] = &[("mul", 2)];
const LATTICE: &[(&str, usize)] = &[("and", 2), ("or", 2)];
const GROUP: &[(&str, usize)] = &[("one", 0), ("inv", 1), ("mul", 2)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_magmas(a in algebra_over(MAGMA, 1..=3), b in algebra_over(MAGMA, 1..=3)) {
        let algs = [Arc::new(a), Arc::new(b)];
        prop_assert!(hsp_closed(&algs, &preset("semigroup").unwrap()).is_ok());
    }

    #[test]
    fn random_bisemigroups(a in algebra_over(LATTICE, 1..=3), b in algebra_over(LATTICE, 1..=3)) {
        let algs = [Arc::new(a), Arc::new(b)];
        prop_assert!(hsp_closed(&algs, &preset("lattice").unwrap()).is_ok());
    }

    #[test]
    fn random_group_signature(a in algebra_over(GROUP, 1..=3), b in algebra_over(GROUP, 1..=3)) {
        let algs = [Arc::new(a), Arc::new(b)];
        prop_assert!(hsp_closed(&algs, &preset("group").unwrap()).is_ok());
    }
}
