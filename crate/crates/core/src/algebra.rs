//! Signatures, carriers of urelements and finite algebras given by operation tables.
//!
//! Carriers are ordered and every table is stored row-major over argument
//! tuples, leftmost argument most significant. Elements are referred to by
//! their position in the carrier; the identifier strings are opaque.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result, ValidationReport, Violation};

/// True when `s` matches `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Ordered operation symbols with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if !seen.insert(name.clone()) {
                return Err(Error::SignatureMismatch(format!("duplicate symbol `{name}`")));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Signature { symbols: out })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    /// Same symbols by (name, arity), order ignored.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        let a: BTreeSet<_> = self.symbols.iter().map(|s| (&s.name, s.arity)).collect();
        let b: BTreeSet<_> = other.symbols.iter().map(|s| (&s.name, s.arity)).collect();
        a == b
    }

    /// For each symbol of `self`, the index of the matching (name, arity)
    /// symbol in `other`.
    pub fn align_to(&self, other: &Signature) -> Result<Vec<usize>> {
        let mut missing = Vec::new();
        let mut map = Vec::with_capacity(self.symbols.len());
        for s in &self.symbols {
            match other.symbols.iter().position(|t| t.name == s.name && t.arity == s.arity) {
                Some(i) => map.push(i),
                None => missing.push(s.to_string()),
            }
        }
        let extra: Vec<String> = other
            .symbols
            .iter()
            .filter(|t| !self.symbols.iter().any(|s| s.name == t.name && s.arity == t.arity))
            .map(|t| t.to_string())
            .collect();
        if missing.is_empty() && extra.is_empty() {
            Ok(map)
        } else {
            let mut parts = Vec::new();
            if !missing.is_empty() {
                parts.push(format!("missing in target: {}", missing.join(", ")));
            }
            if !extra.is_empty() {
                parts.push(format!("missing in source: {}", extra.join(", ")));
            }
            Err(Error::SignatureMismatch(parts.join("; ")))
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An operation table as written in a file, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOperation {
    pub name: String,
    pub arity: usize,
    pub values: Vec<String>,
}

/// An unvalidated algebra description.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawAlgebra {
    pub name: String,
    pub carrier: Vec<String>,
    pub operations: Vec<RawOperation>,
}

/// A finite algebra: ordered carrier, signature and one total table per symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    carrier: Vec<String>,
    signature: Signature,
    tables: Vec<Vec<usize>>,
}

/// Checks every invariant of `raw` and reports all violations at once.
pub fn validate_algebra(raw: &RawAlgebra) -> std::result::Result<FiniteAlgebra, ValidationReport> {
    let mut violations = Vec::new();
    if raw.carrier.is_empty() {
        violations.push(Violation::EmptyCarrier);
    }
    let mut seen = HashSet::new();
    for e in &raw.carrier {
        if !is_identifier(e) {
            violations.push(Violation::InvalidIdentifier(e.clone()));
        }
        if !seen.insert(e.as_str()) {
            violations.push(Violation::DuplicateElement(e.clone()));
        }
    }
    let lookup = |e: &str| raw.carrier.iter().position(|c| c == e);
    let k = raw.carrier.len();
    let mut symbols = Vec::new();
    let mut names = HashSet::new();
    let mut tables = Vec::new();
    for op in &raw.operations {
        if !is_identifier(&op.name) {
            violations.push(Violation::InvalidIdentifier(op.name.clone()));
        }
        if !names.insert(op.name.as_str()) {
            violations.push(Violation::DuplicateSymbol(op.name.clone()));
        }
        let expected = table_len(k, op.arity);
        if op.values.len() != expected {
            violations.push(Violation::TableSizeMismatch {
                symbol: op.name.clone(),
                expected,
                found: op.values.len(),
            });
        }
        let mut table = Vec::with_capacity(op.values.len());
        for v in &op.values {
            match lookup(v) {
                Some(i) => table.push(i),
                None => violations.push(Violation::UnknownElement {
                    symbol: op.name.clone(),
                    element: v.clone(),
                }),
            }
        }
        symbols.push(Symbol { name: op.name.clone(), arity: op.arity });
        tables.push(table);
    }
    if !violations.is_empty() {
        return Err(ValidationReport { algebra: raw.name.clone(), violations });
    }
    Ok(FiniteAlgebra {
        name: raw.name.clone(),
        carrier: raw.carrier.clone(),
        signature: Signature { symbols },
        tables,
    })
}

/// Number of entries of an `arity`-ary table over `k` elements; saturates.
pub fn table_len(k: usize, arity: usize) -> usize {
    let mut n: usize = 1;
    for _ in 0..arity {
        n = n.saturating_mul(k);
    }
    n
}

impl FiniteAlgebra {
    /// Builds an algebra from index tables, validating every invariant.
    pub fn from_tables<N, E, I, S>(name: N, carrier: E, ops: I) -> Result<Self>
    where
        N: Into<String>,
        E: IntoIterator,
        E::Item: Into<String>,
        I: IntoIterator<Item = (S, usize, Vec<usize>)>,
        S: Into<String>,
    {
        let carrier: Vec<String> = carrier.into_iter().map(Into::into).collect();
        let mut raw = RawAlgebra { name: name.into(), carrier, operations: Vec::new() };
        for (sym, arity, table) in ops {
            let mut values = Vec::with_capacity(table.len());
            for v in table {
                match raw.carrier.get(v) {
                    Some(e) => values.push(e.clone()),
                    None => {
                        return Err(Error::ElementOutOfRange { index: v, size: raw.carrier.len() })
                    }
                }
            }
            raw.operations.push(RawOperation { name: sym.into(), arity, values });
        }
        validate_algebra(&raw).map_err(Error::Invalid)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn table(&self, symbol: usize) -> &[usize] {
        &self.tables[symbol]
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.signature.symbols[symbol].arity
    }

    pub fn element(&self, index: usize) -> &str {
        &self.carrier[index]
    }

    pub fn index_of(&self, element: &str) -> Result<usize> {
        self.carrier
            .iter()
            .position(|e| e == element)
            .ok_or_else(|| Error::UnknownElement(element.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, elements: &[S]) -> Result<Vec<usize>> {
        elements.iter().map(|e| self.index_of(e.as_ref())).collect()
    }

    /// Row-major position of an argument tuple.
    #[inline]
    pub fn cell(&self, args: &[usize]) -> usize {
        let k = self.carrier.len();
        args.iter().fold(0, |acc, &a| acc * k + a)
    }

    /// Applies operation `symbol` to `args` (carrier indices).
    #[inline]
    pub fn apply(&self, symbol: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity(symbol));
        self.tables[symbol][self.cell(args)]
    }

    /// Values of all nullary symbols, in signature order.
    pub fn nullary_values(&self) -> Vec<usize> {
        self.signature
            .symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.arity == 0)
            .map(|(i, _)| self.tables[i][0])
            .collect()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Renames every element; `names` must be distinct identifiers of the same count.
    pub fn relabeled<S: Into<String>>(&self, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.size() {
            return Err(Error::InvalidArgument(format!(
                "expected {} element names, found {}",
                self.size(),
                names.len()
            )));
        }
        let ops = self.op_triples();
        FiniteAlgebra::from_tables(self.name.clone(), names, ops)
    }

    fn op_triples(&self) -> Vec<(String, usize, Vec<usize>)> {
        self.signature
            .symbols
            .iter()
            .zip(&self.tables)
            .map(|(s, t)| (s.name.clone(), s.arity, t.clone()))
            .collect()
    }

    /// The reduct keeping only the named symbols (in this algebra's order).
    pub fn reduct<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        for k in keep {
            if self.signature.position(k.as_ref()).is_none() {
                return Err(Error::UnknownSymbol(k.as_ref().to_string()));
            }
        }
        let ops: Vec<_> = self
            .op_triples()
            .into_iter()
            .filter(|(n, _, _)| keep.iter().any(|k| k.as_ref() == n))
            .collect();
        FiniteAlgebra::from_tables(self.name.clone(), self.carrier.clone(), ops)
    }

    /// The subalgebra on `members`, which must be a subuniverse.
    pub fn restrict(&self, members: &[usize], name: impl Into<String>) -> Result<Self> {
        if let ClosureCheck::Escapes { symbol, args, output } = check_closed(self, members)? {
            return Err(Error::NotSubuniverse { symbol, args, output });
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::Invalid(ValidationReport {
                algebra: self.name.clone(),
                violations: vec![Violation::EmptyCarrier],
            }));
        }
        let mut position = vec![usize::MAX; self.size()];
        for (i, &m) in sorted.iter().enumerate() {
            position[m] = i;
        }
        let carrier: Vec<String> = sorted.iter().map(|&m| self.carrier[m].clone()).collect();
        let mut ops = Vec::new();
        for (si, s) in self.signature.symbols.iter().enumerate() {
            let mut table = Vec::with_capacity(table_len(sorted.len(), s.arity));
            for tuple in TupleIter::new(sorted.len(), s.arity) {
                let args: Vec<usize> = tuple.iter().map(|&i| sorted[i]).collect();
                table.push(position[self.apply(si, &args)]);
            }
            ops.push((s.name.clone(), s.arity, table));
        }
        FiniteAlgebra::from_tables(name, carrier, ops)
    }

    pub fn to_raw(&self) -> RawAlgebra {
        RawAlgebra {
            name: self.name.clone(),
            carrier: self.carrier.clone(),
            operations: self
                .signature
                .symbols
                .iter()
                .zip(&self.tables)
                .map(|(s, t)| RawOperation {
                    name: s.name.clone(),
                    arity: s.arity,
                    values: t.iter().map(|&v| self.carrier[v].clone()).collect(),
                })
                .collect(),
        }
    }
}

/// Lexicographic iterator over all `arity`-tuples of `0..k`, first position most significant.
#[derive(Debug, Clone)]
pub struct TupleIter {
    k: usize,
    current: Vec<usize>,
    done: bool,
}

impl TupleIter {
    pub fn new(k: usize, arity: usize) -> Self {
        TupleIter { k, current: vec![0; arity], done: k == 0 && arity > 0 }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.k {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

/// Outcome of a closure check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClosureCheck {
    Closed,
    /// `symbol(args) = output` leaves the subset.
    Escapes { symbol: String, args: Vec<String>, output: String },
}

impl ClosureCheck {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureCheck::Closed)
    }
}

fn check_closed(alg: &FiniteAlgebra, subset: &[usize]) -> Result<ClosureCheck> {
    let mut inside = vec![false; alg.size()];
    for &s in subset {
        if s >= alg.size() {
            return Err(Error::ElementOutOfRange { index: s, size: alg.size() });
        }
        inside[s] = true;
    }
    let members: Vec<usize> = (0..alg.size()).filter(|&i| inside[i]).collect();
    for (si, sym) in alg.signature().symbols().iter().enumerate() {
        for tuple in TupleIter::new(members.len(), sym.arity) {
            let args: Vec<usize> = tuple.iter().map(|&i| members[i]).collect();
            let out = alg.apply(si, &args);
            if !inside[out] {
                return Ok(ClosureCheck::Escapes {
                    symbol: sym.name.clone(),
                    args: args.iter().map(|&a| alg.element(a).to_string()).collect(),
                    output: alg.element(out).to_string(),
                });
            }
        }
    }
    Ok(ClosureCheck::Closed)
}

/// Whether `subset` is closed under every operation (nullary ones included).
///
/// On failure the witness is the first escaping application, scanning symbols in
/// signature order and argument tuples lexicographically over the subset in
/// carrier order.
pub fn is_subuniverse<S: AsRef<str>>(alg: &FiniteAlgebra, subset: &[S]) -> Result<ClosureCheck> {
    let idx = alg.indices_of(subset)?;
    check_closed(alg, &idx)
}

/// Index-based form of [`is_subuniverse`].
pub fn is_subuniverse_indices(alg: &FiniteAlgebra, subset: &[usize]) -> Result<ClosureCheck> {
    check_closed(alg, subset)
}

/// A subset of an algebra's carrier verified to be closed under its operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subuniverse<'a> {
    parent: &'a FiniteAlgebra,
    members: Vec<usize>,
}

impl<'a> Subuniverse<'a> {
    pub fn new(parent: &'a FiniteAlgebra, members: &[usize]) -> Result<Self> {
        if let ClosureCheck::Escapes { symbol, args, output } = check_closed(parent, members)? {
            return Err(Error::NotSubuniverse { symbol, args, output });
        }
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        Ok(Subuniverse { parent, members })
    }

    pub fn from_names<S: AsRef<str>>(parent: &'a FiniteAlgebra, names: &[S]) -> Result<Self> {
        let idx = parent.indices_of(names)?;
        Subuniverse::new(parent, &idx)
    }

    pub fn parent(&self) -> &'a FiniteAlgebra {
        self.parent
    }

    /// Members in carrier order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.binary_search(&element).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.members.iter().map(|&m| self.parent.element(m).to_string()).collect()
    }

    /// The subalgebra carried by this subuniverse; fails when empty.
    pub fn to_algebra(&self, name: impl Into<String>) -> Result<FiniteAlgebra> {
        self.parent.restrict(&self.members, name)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn raw_boolean2() -> RawAlgebra {
        boolean2().to_raw()
    }

    #[test]
    fn boolean_fixtures_are_valid() {
        let b = validate_algebra(&raw_boolean2()).unwrap();
        assert_eq!(b.size(), 2);
        let and = b.signature().position("and").unwrap();
        assert_eq!(b.apply(and, &[0, 1]), 0);
        assert_eq!(b.apply(and, &[1, 1]), 1);
    }

    #[test]
    fn one_element_binary() {
        let a = FiniteAlgebra::from_tables("E", ["e"], [("m", 2, vec![0])]).unwrap();
        assert_eq!(a.apply(0, &[0, 0]), 0);
    }

    #[test]
    fn truncated_table_reports_size() {
        let mut raw = raw_boolean2();
        raw.operations[3].values.truncate(3);
        let report = validate_algebra(&raw).unwrap_err();
        assert_eq!(
            report.violations,
            vec![Violation::TableSizeMismatch { symbol: "and".into(), expected: 4, found: 3 }]
        );
        assert!(report.to_string().contains("expected 4, found 3"));
    }

    #[test]
    fn all_violations_reported() {
        let raw = RawAlgebra {
            name: "Bad".into(),
            carrier: vec!["a".into(), "a".into()],
            operations: vec![RawOperation {
                name: "f".into(),
                arity: 1,
                values: vec!["a".into(), "q".into(), "a".into()],
            }],
        };
        let report = validate_algebra(&raw).unwrap_err();
        assert!(report.violations.contains(&Violation::DuplicateElement("a".into())));
        assert!(report
            .violations
            .contains(&Violation::TableSizeMismatch { symbol: "f".into(), expected: 2, found: 3 }));
        assert!(report
            .violations
            .contains(&Violation::UnknownElement { symbol: "f".into(), element: "q".into() }));
    }

    #[test]
    fn empty_carrier_rejected() {
        let raw = RawAlgebra { name: "E".into(), ..Default::default() };
        assert_eq!(validate_algebra(&raw).unwrap_err().violations, vec![Violation::EmptyCarrier]);
    }

    #[test]
    fn lattice_reduct_subuniverse_bounds() {
        let o = boolean4().reduct(&["and", "or"]).unwrap();
        assert!(is_subuniverse(&o, &["o1", "o4"]).unwrap().is_closed());
    }

    #[test]
    fn nullary_escape_witness() {
        let b = boolean2();
        assert_eq!(
            is_subuniverse(&b, &["b1"]).unwrap(),
            ClosureCheck::Escapes { symbol: "one".into(), args: vec![], output: "b2".into() }
        );
    }

    #[test]
    fn full_carrier_is_subuniverse() {
        for a in [boolean2(), boolean4(), lattice2(), z2()] {
            let all: Vec<usize> = (0..a.size()).collect();
            assert!(is_subuniverse_indices(&a, &all).unwrap().is_closed());
        }
    }

    #[test]
    fn unknown_subset_element() {
        assert!(matches!(is_subuniverse(&boolean2(), &["zz"]), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn tuple_iter_orders_lexicographically() {
        let v: Vec<_> = TupleIter::new(2, 2).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(TupleIter::new(3, 0).count(), 1);
        assert_eq!(TupleIter::new(0, 2).count(), 0);
    }

    #[test]
    fn restrict_builds_subalgebra() {
        let o = boolean4().reduct(&["and", "or"]).unwrap();
        let s = Subuniverse::new(&o, &[3, 0]).unwrap();
        let sub = s.to_algebra("S").unwrap();
        assert_eq!(sub.carrier(), &["o1".to_string(), "o4".to_string()]);
        assert_eq!(sub.table(0), &[0, 0, 0, 1]);
    }

    #[test]
    fn align_by_name_not_position() {
        let a = Signature::new([("f", 2), ("g", 1)]).unwrap();
        let b = Signature::new([("g", 1), ("f", 2)]).unwrap();
        assert_eq!(a.align_to(&b).unwrap(), vec![1, 0]);
        let c = Signature::new([("g", 2), ("f", 2)]).unwrap();
        assert!(a.align_to(&c).is_err());
    }

    #[test]
    fn intersections_of_subuniverses_are_subuniverses() {
        for a in [boolean2(), boolean4(), boolean4().reduct(&["and", "or"]).unwrap(), lattice2(), z2()] {
            let n = a.size();
            let subs: Vec<u32> = (0u32..1 << n)
                .filter(|&m| {
                    let s: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                    is_subuniverse_indices(&a, &s).unwrap().is_closed()
                })
                .collect();
            for &x in &subs {
                for &y in &subs {
                    assert!(subs.contains(&(x & y)), "{}: {x:b} & {y:b}", a.name());
                }
            }
        }
    }
}
