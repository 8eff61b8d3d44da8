//! Direct products with fresh element names, projections, mediating morphisms
//! and a finite check of the universal property.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{is_identifier, table_len, FiniteAlgebra, Signature};
use crate::error::{Error, Result};
use crate::morphism::{check_homomorphism, enumerate_homomorphisms, HomMode, Morphism};

/// How product elements are named.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Naming {
    /// `<prefix><index>` with index in tuple order.
    Prefix(String),
    /// One name per tuple, in tuple order.
    Explicit(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct RelabeledProduct {
    pub factors: Vec<Arc<FiniteAlgebra>>,
    pub product: Arc<FiniteAlgebra>,
    /// `tuples[i]` is the factor tuple behind product element `i`.
    pub tuples: Vec<Vec<usize>>,
    pub projections: Vec<Morphism>,
}

impl RelabeledProduct {
    /// Product element for a factor tuple (first factor most significant).
    pub fn index_of_tuple(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.factors).fold(0, |acc, (&c, f)| acc * f.size() + c)
    }

    /// Names of each product element's components.
    pub fn relabel_map(&self) -> Vec<(String, Vec<String>)> {
        self.tuples
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let parts = t.iter().zip(&self.factors).map(|(&c, f)| f.element(c).to_string()).collect();
                (self.product.element(i).to_string(), parts)
            })
            .collect()
    }
}

fn tuples_for(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().product();
    (0..total)
        .map(|mut i| {
            let mut t = vec![0usize; sizes.len()];
            for (slot, &s) in t.iter_mut().zip(sizes).rev() {
                *slot = i % s;
                i /= s;
            }
            t
        })
        .collect()
}

/// The product of `factors`, which must share a signature by name and arity.
/// Symbol order follows the first factor.
pub fn direct_product(factors: &[Arc<FiniteAlgebra>], naming: Naming, name: &str) -> Result<RelabeledProduct> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty factor list; use empty_product with a signature".into()))?;
    let sig = first.signature().clone();
    let aligns: Vec<Vec<usize>> =
        factors.iter().map(|f| sig.align_to(f.signature())).collect::<Result<_>>()?;
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&t| t <= 1 << 16)
        .ok_or_else(|| Error::BudgetExceeded("product carrier too large".into()))?;
    let names = match naming {
        Naming::Prefix(p) => (0..total).map(|i| format!("{p}{i}")).collect::<Vec<_>>(),
        Naming::Explicit(list) => {
            if list.len() != total {
                return Err(Error::InvalidArgument(format!(
                    "expected {total} element names, found {}",
                    list.len()
                )));
            }
            list
        }
    };
    if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
        return Err(Error::InvalidArgument(format!("invalid element name `{bad}`")));
    }
    let tuples = tuples_for(&sizes);
    let encode = |t: &[usize]| t.iter().zip(&sizes).fold(0, |acc, (&c, &s)| acc * s + c);
    let mut ops = Vec::with_capacity(sig.len());
    for (si, sym) in sig.symbols().iter().enumerate() {
        let cells = table_len(total, sym.arity);
        let cell = |c: usize| {
            let mut rest = c;
            let mut args = vec![0usize; sym.arity];
            for slot in args.iter_mut().rev() {
                *slot = rest % total;
                rest /= total;
            }
            let out: Vec<usize> = (0..factors.len())
                .map(|j| {
                    let comps: Vec<usize> = args.iter().map(|&a| tuples[a][j]).collect();
                    factors[j].apply(aligns[j][si], &comps)
                })
                .collect();
            encode(&out)
        };
        let table: Vec<usize> = if cells >= 4096 {
            (0..cells).into_par_iter().map(cell).collect()
        } else {
            (0..cells).map(cell).collect()
        };
        ops.push((sym.name.clone(), sym.arity, table));
    }
    let product = Arc::new(FiniteAlgebra::from_tables(name, names, ops)?);
    let projections = factors
        .iter()
        .enumerate()
        .map(|(j, f)| Morphism::new(product.clone(), f.clone(), tuples.iter().map(|t| t[j]).collect()))
        .collect::<Result<_>>()?;
    Ok(RelabeledProduct { factors: factors.to_vec(), product, tuples, projections })
}

/// The one-element algebra over `signature`: the product of no factors.
pub fn empty_product(signature: &Signature, element: &str, name: &str) -> Result<RelabeledProduct> {
    let ops: Vec<(String, usize, Vec<usize>)> =
        signature.symbols().iter().map(|s| (s.name.clone(), s.arity, vec![0])).collect();
    let product = Arc::new(FiniteAlgebra::from_tables(name, [element], ops)?);
    Ok(RelabeledProduct { factors: Vec::new(), product, tuples: vec![Vec::new()], projections: Vec::new() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MediationTranscript {
    pub homomorphism: bool,
    /// `projection_i ∘ φ = leg_i`, per factor.
    pub commutes: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct Mediation {
    pub morphism: Morphism,
    pub transcript: MediationTranscript,
}

/// The map `a ↦ (leg_1(a), …, leg_k(a))`, re-verified after assembly.
pub fn mediating_morphism(
    apex: &Arc<FiniteAlgebra>,
    legs: &[Morphism],
    prod: &RelabeledProduct,
) -> Result<Mediation> {
    if legs.len() != prod.factors.len() {
        return Err(Error::InvalidArgument(format!(
            "{} legs for {} factors",
            legs.len(),
            prod.factors.len()
        )));
    }
    for (i, (leg, f)) in legs.iter().zip(&prod.factors).enumerate() {
        if **leg.source() != **apex || **leg.target() != **f {
            return Err(Error::InvalidArgument(format!("leg {i} has the wrong source or target")));
        }
        if !check_homomorphism(leg)?.holds() {
            return Err(Error::LegNotHomomorphism { leg: i });
        }
    }
    let map = (0..apex.size())
        .map(|a| {
            let t: Vec<usize> = legs.iter().map(|l| l.apply(a)).collect();
            prod.index_of_tuple(&t)
        })
        .collect();
    let phi = Morphism::new(apex.clone(), prod.product.clone(), map)?;
    let homomorphism = check_homomorphism(&phi)?.holds();
    let commutes = prod
        .projections
        .iter()
        .zip(legs)
        .map(|(p, l)| p.after(&phi).map(|c| c.map() == l.map()))
        .collect::<Result<_>>()?;
    Ok(Mediation { morphism: phi, transcript: MediationTranscript { homomorphism, commutes } })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Uniqueness {
    Confirmed,
    Violated,
    NotChecked { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApexReport {
    pub apex: String,
    pub cones: u64,
    pub passed: u64,
    pub uniqueness: Uniqueness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalReport {
    pub product: String,
    pub apices: Vec<ApexReport>,
    pub holds: bool,
}

/// Number of maps `apex → product` commuting with the cone. A map commutes
/// iff it does so pointwise, so the count is a product of per-element counts.
fn commuting_maps(apex: usize, legs: &[Morphism], prod: &RelabeledProduct) -> u128 {
    (0..apex)
        .map(|a| {
            (0..prod.product.size())
                .filter(|&p| prod.projections.iter().zip(legs).all(|(pr, l)| pr.apply(p) == l.apply(a)))
                .count() as u128
        })
        .product()
}

/// Every cone from every apex must factor through the product exactly once.
pub fn verify_universal_property(
    prod: &RelabeledProduct,
    apices: &[Arc<FiniteAlgebra>],
    budget: u64,
) -> Result<UniversalReport> {
    let mut reports = Vec::new();
    for apex in apices {
        let legs_per_factor: Result<Vec<Vec<Morphism>>> = prod
            .factors
            .iter()
            .map(|f| {
                let e = enumerate_homomorphisms(apex, f, HomMode::List, budget)?;
                e.maps.into_iter().map(|m| Morphism::new(apex.clone(), f.clone(), m)).collect()
            })
            .collect();
        let legs_per_factor = match legs_per_factor {
            Ok(l) => l,
            Err(Error::BudgetExceeded(reason)) => {
                reports.push(ApexReport {
                    apex: apex.name().to_string(),
                    cones: 0,
                    passed: 0,
                    uniqueness: Uniqueness::NotChecked { reason },
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let cones: u128 = legs_per_factor.iter().map(|l| l.len() as u128).product();
        if cones > budget as u128 {
            reports.push(ApexReport {
                apex: apex.name().to_string(),
                cones: cones.min(u64::MAX as u128) as u64,
                passed: 0,
                uniqueness: Uniqueness::NotChecked { reason: format!("{cones} cones exceed the budget") },
            });
            continue;
        }
        let mut passed = 0;
        let mut unique = true;
        let mut choice = vec![0usize; legs_per_factor.len()];
        'cones: for _ in 0..cones {
            let legs: Vec<Morphism> =
                choice.iter().zip(&legs_per_factor).map(|(&c, l)| l[c].clone()).collect();
            let m = mediating_morphism(apex, &legs, prod)?;
            if m.transcript.homomorphism && m.transcript.commutes.iter().all(|&c| c) {
                passed += 1;
            }
            unique &= commuting_maps(apex.size(), &legs, prod) == 1;
            for j in (0..choice.len()).rev() {
                choice[j] += 1;
                if choice[j] < legs_per_factor[j].len() {
                    continue 'cones;
                }
                choice[j] = 0;
            }
        }
        reports.push(ApexReport {
            apex: apex.name().to_string(),
            cones: cones as u64,
            passed,
            uniqueness: if unique { Uniqueness::Confirmed } else { Uniqueness::Violated },
        });
    }
    let holds = reports
        .iter()
        .all(|r| r.passed == r.cones && matches!(r.uniqueness, Uniqueness::Confirmed));
    Ok(UniversalReport { product: prod.product.name().to_string(), apices: reports, holds })
}

/// Element names used for the eight-element product of the two- and four-element boolean algebras.
pub const STU_NAMES: [&str; 8] = ["s", "t", "u", "v", "w", "x", "y", "z"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::morphism::{check_isomorphism, DEFAULT_SEARCH_BUDGET};

    fn arc(a: FiniteAlgebra) -> Arc<FiniteAlgebra> {
        Arc::new(a)
    }

    fn bo() -> RelabeledProduct {
        let names = STU_NAMES.iter().map(|s| s.to_string()).collect();
        direct_product(&[arc(boolean2()), arc(boolean4())], Naming::Explicit(names), "P").unwrap()
    }

    #[test]
    fn stu_product_cells() {
        let p = bo();
        let and = p.product.signature().position("and").unwrap();
        let or = p.product.signature().position("or").unwrap();
        let (t, u) = (1, 2);
        assert_eq!(p.product.element(p.product.apply(and, &[t, u])), "s");
        assert_eq!(p.product.element(p.product.apply(or, &[t, u])), "v");
        assert_eq!(p.relabel_map()[2], ("u".to_string(), vec!["b1".to_string(), "o3".to_string()]));
        for pr in &p.projections {
            let s = pr.status().unwrap();
            assert!(s.homomorphism && s.surjective);
        }
    }

    #[test]
    fn naming_errors() {
        let f = [arc(boolean2()), arc(boolean2())];
        assert!(direct_product(&f, Naming::Explicit(vec!["a".into()]), "P").is_err());
        let dup = vec!["a".into(), "a".into(), "b".into(), "c".into()];
        assert!(direct_product(&f, Naming::Explicit(dup), "P").is_err());
        assert!(direct_product(&[arc(boolean2()), arc(lattice2())], Naming::Prefix("p".into()), "P").is_err());
        assert!(direct_product(&[], Naming::Prefix("p".into()), "P").is_err());
    }

    #[test]
    fn square_of_two_element_boolean_algebra_is_four_element() {
        let p = direct_product(&[arc(boolean2()), arc(boolean2())], Naming::Prefix("p".into()), "BB").unwrap();
        assert!(check_isomorphism(&p.product, &arc(boolean4()), DEFAULT_SEARCH_BUDGET).unwrap().is_some());
    }

    #[test]
    fn mediating_examples() {
        let p = bo();
        let b = arc(boolean2());
        let o = arc(boolean4());
        let id = Morphism::identity(b.clone());
        let forced = Morphism::new(b.clone(), o.clone(), vec![0, 3]).unwrap();
        let m = mediating_morphism(&b, &[id.clone(), forced], &p).unwrap();
        assert_eq!(m.morphism.map(), [0, 7]);
        assert!(m.transcript.homomorphism && m.transcript.commutes == vec![true, true]);
        let bad = Morphism::new(b.clone(), o, vec![0, 2]).unwrap();
        assert!(matches!(mediating_morphism(&b, &[id, bad], &p), Err(Error::LegNotHomomorphism { leg: 1 })));
        let m = mediating_morphism(&p.product, &p.projections, &p).unwrap();
        assert_eq!(m.morphism.map(), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn universal_property() {
        let p = bo();
        let r = verify_universal_property(&p, &[arc(boolean2()), arc(boolean4()), p.product.clone()], 1_000_000)
            .unwrap();
        assert!(r.holds, "{r:?}");
        let bb = direct_product(&[arc(boolean2()), arc(boolean2())], Naming::Prefix("p".into()), "BB").unwrap();
        let t = arc(trivial(boolean2().signature()));
        // the one-element algebra has no cones into a nontrivial boolean algebra
        let r = verify_universal_property(&bb, &[t], 1000).unwrap();
        assert_eq!(r.apices[0].cones, 0);
    }

    #[test]
    fn empty_product_is_terminal() {
        let e = empty_product(z2().signature(), "e", "One").unwrap();
        assert_eq!(e.product.size(), 1);
        assert_eq!(enumerate_homomorphisms(&z2(), &e.product, HomMode::Count, 100).unwrap().count, 1);
    }
}
