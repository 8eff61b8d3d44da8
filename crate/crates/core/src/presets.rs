//! Equation sets for common varieties.
//!
//! Symbol conventions: groups and semigroups use `one/0`, `inv/1`, `mul/2`;
//! rings `zero/0`, `neg/1`, `add/2`, `mul/2`; lattices `and/2`, `or/2`, and
//! boolean algebras add `zero/0`, `one/0`, `not/1`. Vector spaces over the
//! `q`-element field use `zero/0`, `neg/1`, one scalar operator `s<r>/1` per
//! field element `r`, and `add/2`.

use crate::algebra::{FiniteAlgebra, TupleIter};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::term::{Equation, EquationSet, Term};

pub const PRESET_NAMES: &[&str] =
    &["group", "abelian-group", "ring", "lattice", "boolean-algebra", "semigroup", "vector-space(q)"];

struct Builder {
    equations: Vec<Equation>,
}

impl Builder {
    fn new() -> Self {
        Builder { equations: Vec::new() }
    }

    fn law(&mut self, label: &str, vars: &[&str], pairs: &[(&str, &str)]) -> &mut Self {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        for (l, r) in pairs {
            let lhs = Term::parse(l, &vars).expect("preset term");
            let rhs = Term::parse(r, &vars).expect("preset term");
            self.equations.push(Equation { lhs, rhs, vars: vars.clone(), label: label.into() });
        }
        self
    }

    fn build(self, name: &str) -> EquationSet {
        EquationSet::new(name, self.equations)
    }
}

fn group_laws(b: &mut Builder) {
    // x·1 ≈ 1·x ≈ x and x·ι(x) ≈ ι(x)·x ≈ 1, each chain split in two
    b.law("identity", &["x"], &[("mul(x, one())", "x"), ("mul(one(), x)", "x")])
        .law("inverse", &["x"], &[("mul(x, inv(x))", "one()"), ("mul(inv(x), x)", "one()")])
        .law("associativity", &["x", "y", "z"], &[("mul(x, mul(y, z))", "mul(mul(x, y), z)")]);
}

fn lattice_laws(b: &mut Builder) {
    b.law("commutativity", &["x", "y"], &[("and(x, y)", "and(y, x)"), ("or(x, y)", "or(y, x)")])
        .law(
            "associativity",
            &["x", "y", "z"],
            &[("and(x, and(y, z))", "and(and(x, y), z)"), ("or(x, or(y, z))", "or(or(x, y), z)")],
        )
        .law("idempotence", &["x"], &[("and(x, x)", "x"), ("or(x, x)", "x")])
        .law("absorption", &["x", "y"], &[("and(x, or(x, y))", "x"), ("or(x, and(x, y))", "x")]);
}

/// Looks up a preset by name; `vector-space(q)` also accepts `vector-space:q`.
pub fn preset(name: &str) -> Result<EquationSet> {
    let mut b = Builder::new();
    match name {
        "group" => group_laws(&mut b),
        "abelian-group" => {
            group_laws(&mut b);
            b.law("commutativity", &["x", "y"], &[("mul(x, y)", "mul(y, x)")]);
        }
        "semigroup" => {
            b.law("associativity", &["x", "y", "z"], &[("mul(x, mul(y, z))", "mul(mul(x, y), z)")]);
        }
        "ring" => {
            b.law("additive associativity", &["x", "y", "z"], &[("add(x, add(y, z))", "add(add(x, y), z)")])
                .law("additive commutativity", &["x", "y"], &[("add(x, y)", "add(y, x)")])
                .law("additive identity", &["x"], &[("add(x, zero())", "x")])
                .law("additive inverse", &["x"], &[("add(x, neg(x))", "zero()")])
                .law("multiplicative associativity", &["x", "y", "z"], &[("mul(x, mul(y, z))", "mul(mul(x, y), z)")])
                .law(
                    "distributivity",
                    &["x", "y", "z"],
                    &[
                        ("mul(x, add(y, z))", "add(mul(x, y), mul(x, z))"),
                        ("mul(add(x, y), z)", "add(mul(x, z), mul(y, z))"),
                    ],
                );
        }
        "lattice" => lattice_laws(&mut b),
        "boolean-algebra" => {
            lattice_laws(&mut b);
            b.law("distributivity", &["x", "y", "z"], &[("and(x, or(y, z))", "or(and(x, y), and(x, z))")])
                .law("bounds", &["x"], &[("and(x, zero())", "zero()"), ("or(x, one())", "one()")])
                .law("complement", &["x"], &[("and(x, not(x))", "zero()"), ("or(x, not(x))", "one()")]);
        }
        _ => {
            let q = parse_vector_space(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
            return vector_space(q);
        }
    }
    Ok(b.build(name))
}

fn parse_vector_space(name: &str) -> Option<usize> {
    let rest = name.strip_prefix("vector-space")?;
    let q = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| rest.strip_prefix(':'))?;
    q.trim().parse().ok()
}

/// Scalar operator symbol for field element `r`.
pub fn scalar_symbol(r: usize) -> String {
    format!("s{r}")
}

/// The eight vector-space schemas instantiated over the `q`-element field.
pub fn vector_space(q: usize) -> Result<EquationSet> {
    if q > 9 {
        return Err(Error::UnknownPreset(format!("vector-space({q})")));
    }
    let f = FiniteField::new(q).map_err(|_| Error::UnknownPreset(format!("vector-space({q})")))?;
    let mut b = Builder::new();
    b.law("1 additive associativity", &["x1", "x2", "x3"], &[("add(x1, add(x2, x3))", "add(add(x1, x2), x3)")])
        .law("2 additive commutativity", &["x1", "x2"], &[("add(x1, x2)", "add(x2, x1)")])
        .law("3 additive identity", &["x1"], &[("add(x1, zero())", "x1")])
        .law("4 additive inverse", &["x1"], &[("add(x1, neg(x1))", "zero()")]);
    for r in 0..q {
        let s = scalar_symbol(r);
        b.law(
            "5 scalar distributes over vectors",
            &["x1", "x2"],
            &[(&format!("{s}(add(x1, x2))"), &format!("add({s}(x1), {s}(x2))"))],
        );
    }
    for r in 0..q {
        for t in 0..q {
            let a = f.mul[r][t];
            b.law(
                "6 scalar multiplication",
                &["x1"],
                &[(
                    &format!("{}({}(x1))", scalar_symbol(r), scalar_symbol(t)),
                    &format!("{}(x1)", scalar_symbol(a)),
                )],
            );
        }
    }
    b.law("7 multiplicative identity", &["x1"], &[(&format!("{}(x1)", scalar_symbol(f.one())), "x1")]);
    for r in 0..q {
        for t in 0..q {
            let sum = f.add[r][t];
            b.law(
                "8 scalar addition",
                &["x1"],
                &[(
                    &format!("add({}(x1), {}(x1))", scalar_symbol(r), scalar_symbol(t)),
                    &format!("{}(x1)", scalar_symbol(sum)),
                )],
            );
        }
    }
    Ok(b.build(&format!("vector-space({q})")))
}

/// The vector space `F_q^dim` as a finite algebra in the preset signature.
///
/// Elements are named `v` followed by the coordinates as base-`q` digits.
pub fn vector_space_algebra(q: usize, dim: usize, name: &str) -> Result<FiniteAlgebra> {
    let f = FiniteField::new(q)?;
    let vectors: Vec<Vec<usize>> = TupleIter::new(q, dim).collect();
    let index = |v: &[usize]| v.iter().fold(0, |acc, &d| acc * q + d);
    let carrier: Vec<String> =
        vectors.iter().map(|v| format!("v{}", v.iter().map(|d| d.to_string()).collect::<String>())).collect();
    let mut ops: Vec<(String, usize, Vec<usize>)> = Vec::new();
    ops.push(("zero".into(), 0, vec![0]));
    let neg: Vec<usize> = vectors
        .iter()
        .map(|v| {
            let n: Vec<usize> = v.iter().map(|&d| (0..q).find(|&e| f.add[d][e] == 0).unwrap()).collect();
            index(&n)
        })
        .collect();
    ops.push(("neg".into(), 1, neg));
    for r in 0..q {
        let table = vectors
            .iter()
            .map(|v| index(&v.iter().map(|&d| f.mul[r][d]).collect::<Vec<_>>()))
            .collect();
        ops.push((scalar_symbol(r), 1, table));
    }
    let mut add = Vec::with_capacity(vectors.len() * vectors.len());
    for a in &vectors {
        for b in &vectors {
            add.push(index(&a.iter().zip(b).map(|(&x, &y)| f.add[x][y]).collect::<Vec<_>>()));
        }
    }
    ops.push(("add".into(), 2, add));
    FiniteAlgebra::from_tables(name, carrier, ops)
}
