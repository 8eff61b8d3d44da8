use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ualg_core::morphism::{enumerate_homomorphisms, HomMode, DEFAULT_SEARCH_BUDGET};
use ualg_core::product::{direct_product, Naming};
use ualg_core::reduced::{adjoin_generate, canonicalize_names, DEFAULT_EXTENSION_BUDGET};
use ualg_core::{generate, parse_algebra_file, preset, satisfies_all, FiniteAlgebra};

const SOURCE: &str = include_str!("../../../data/examples/paper_BO.alg");

fn algebras() -> (Arc<FiniteAlgebra>, Arc<FiniteAlgebra>) {
    let mut algs = parse_algebra_file(SOURCE).expect("bundled file parses").into_iter().map(Arc::new);
    (algs.next().unwrap(), algs.next().unwrap())
}

fn satisfaction(c: &mut Criterion) {
    let (_, o) = algebras();
    let eqs = preset("boolean").unwrap();
    c.bench_function("satisfies boolean on O", |b| b.iter(|| satisfies_all(black_box(&o), &eqs).unwrap()));
}

fn generation(c: &mut Criterion) {
    let (b2, o) = algebras();
    let p = direct_product(&[b2, o], Naming::Prefix("p".into()), "P").unwrap();
    c.bench_function("generate P from one element", |b| b.iter(|| generate(black_box(&p.product), &[3]).unwrap()));
}

fn homomorphisms(c: &mut Criterion) {
    let (b2, o) = algebras();
    let p = Arc::clone(&direct_product(&[b2, o.clone()], Naming::Prefix("p".into()), "P").unwrap().product);
    c.bench_function("count homs P -> O", |b| {
        b.iter(|| enumerate_homomorphisms(black_box(&p), &o, HomMode::Count, DEFAULT_SEARCH_BUDGET).unwrap())
    });
}

fn products(c: &mut Criterion) {
    let (_, o) = algebras();
    c.bench_function("O x O x O", |b| {
        b.iter(|| direct_product(&[o.clone(), o.clone(), o.clone()], Naming::Prefix("p".into()), "P").unwrap())
    });
}

fn adjoin(c: &mut Criterion) {
    let (b2, _) = algebras();
    let gens: Vec<_> = ["per b1 b2", "per b1 b1 b2"].iter().map(|g| canonicalize_names(&b2, g).unwrap()).collect();
    c.bench_function("adjoin two periodic sequences to B", |b| {
        b.iter(|| adjoin_generate(black_box(&b2), &gens, DEFAULT_EXTENSION_BUDGET).unwrap())
    });
}

criterion_group!(benches, satisfaction, generation, homomorphisms, products, adjoin);
criterion_main!(benches);
