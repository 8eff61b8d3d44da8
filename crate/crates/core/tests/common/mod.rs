#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use ualg_core::{parse_algebra_file, FiniteAlgebra};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn shipped() -> Vec<Arc<FiniteAlgebra>> {
    let mut out = Vec::new();
    for file in ["paper_BO.alg", "small.alg", "vector.alg"] {
        let text = std::fs::read_to_string(data_dir().join("examples").join(file)).unwrap();
        out.extend(parse_algebra_file(&text).unwrap().into_iter().map(Arc::new));
    }
    out
}

pub fn shipped_named(name: &str) -> Arc<FiniteAlgebra> {
    shipped().into_iter().find(|a| a.name() == name).unwrap_or_else(|| panic!("no shipped algebra {name}"))
}

/// Random tables over a fixed signature and a carrier of `size` elements `e0, e1, …`.
pub fn algebra_over(sig: &'static [(&'static str, usize)], sizes: std::ops::RangeInclusive<usize>) -> BoxedStrategy<FiniteAlgebra> {
    sizes
        .prop_flat_map(move |k| {
            let tables: Vec<_> =
                sig.iter().map(|&(_, n)| proptest::collection::vec(0..k, k.pow(n as u32))).collect();
            (Just(k), tables)
        })
        .prop_map(move |(k, tables)| {
            let ops = sig.iter().zip(tables).map(|(&(s, n), t)| (s, n, t));
            FiniteAlgebra::from_tables("R", (0..k).map(|i| format!("e{i}")), ops).unwrap()
        })
        .boxed()
}

/// Random signature drawn from a pool of symbols of arity 0..=2, with random tables.
pub fn any_algebra(max_size: usize) -> BoxedStrategy<FiniteAlgebra> {
    const POOL: [(&str, usize); 6] = [("c", 0), ("d", 0), ("f", 1), ("g", 1), ("m", 2), ("p", 2)];
    (1..=max_size, proptest::bits::u8::between(0, POOL.len()))
        .prop_flat_map(|(k, mask)| {
            let chosen: Vec<(&'static str, usize)> =
                POOL.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| *s).collect();
            let tables: Vec<_> =
                chosen.iter().map(|&(_, n)| proptest::collection::vec(0..k, k.pow(n as u32))).collect();
            (Just(k), Just(chosen), tables)
        })
        .prop_map(|(k, chosen, tables)| {
            let ops = chosen.iter().zip(tables).map(|(&(s, n), t)| (s, n, t));
            FiniteAlgebra::from_tables("R", (0..k).map(|i| format!("e{i}")), ops).unwrap()
        })
        .boxed()
}

/// Least subuniverse containing `seed`, as the intersection of every
/// subuniverse that contains it (subsets enumerated as bitmasks).
pub fn intersection_oracle(alg: &FiniteAlgebra, seed: &[usize]) -> Vec<usize> {
    let k = alg.size();
    let seed_mask: u32 = seed.iter().fold(0, |m, &e| m | 1 << e);
    let mut meet: u32 = (1 << k) - 1;
    for mask in 0u32..(1 << k) {
        if mask & seed_mask != seed_mask {
            continue;
        }
        let members: Vec<usize> = (0..k).filter(|&e| mask & (1 << e) != 0).collect();
        if closed(alg, &members) {
            meet &= mask;
        }
    }
    (0..k).filter(|&e| meet & (1 << e) != 0).collect()
}

/// Closure under every operation, checked over all argument tuples.
pub fn closed(alg: &FiniteAlgebra, members: &[usize]) -> bool {
    for s in 0..alg.signature().len() {
        let n = alg.arity(s);
        let mut args = vec![0usize; n];
        let total = members.len().pow(n as u32);
        for mut code in 0..total {
            for slot in args.iter_mut().rev() {
                *slot = members[code % members.len()];
                code /= members.len();
            }
            if !members.contains(&alg.apply(s, &args)) {
                return false;
            }
        }
    }
    true
}

/// Every map between the carriers that preserves all operations.
pub fn brute_force_homs(src: &FiniteAlgebra, dst: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let align = src.signature().align_to(dst.signature()).unwrap();
    let (n, m) = (src.size(), dst.size());
    let mut out = Vec::new();
    for code in 0..m.pow(n as u32) {
        let mut map = vec![0usize; n];
        let mut c = code;
        for slot in map.iter_mut().rev() {
            *slot = c % m;
            c /= m;
        }
        if preserves(src, dst, &align, &map) {
            out.push(map);
        }
    }
    out.sort();
    out
}

pub fn preserves(src: &FiniteAlgebra, dst: &FiniteAlgebra, align: &[usize], map: &[usize]) -> bool {
    for (s, &t) in align.iter().enumerate() {
        let n = src.arity(s);
        let total = src.size().pow(n as u32);
        let mut args = vec![0usize; n];
        for mut code in 0..total {
            for slot in args.iter_mut().rev() {
                *slot = code % src.size();
                code /= src.size();
            }
            let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            if map[src.apply(s, &args)] != dst.apply(t, &image) {
                return false;
            }
        }
    }
    true
}
