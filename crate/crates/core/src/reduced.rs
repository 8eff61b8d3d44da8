//! Eventually periodic sequences over a finite algebra, taken modulo agreement
//! on a cofinite set of indices.
//!
//! This is a reduced power by the cofinite filter restricted to its
//! computable fragment; it is not an ultrapower, so only equations (and
//! other Horn sentences) are guaranteed to carry over from the base.
//!
//! Two sequences agree cofinitely exactly when their periodic tails agree,
//! so a class is determined by one purely periodic sequence. The canonical
//! form stores that sequence aligned at index 0 with a primitive period.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{table_len, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::logic::{satisfies_all, SatisfactionReport};
use crate::morphism::{check_homomorphism, Morphism};
use crate::product::RelabeledProduct;
use crate::term::EquationSet;

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A raw eventually periodic sequence: `preperiod` followed by `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Representative {
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
}

impl Representative {
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Representative { preperiod, period })
    }

    pub fn at(&self, i: usize) -> usize {
        match self.preperiod.get(i) {
            Some(&v) => v,
            None => self.period[(i - self.preperiod.len()) % self.period.len()],
        }
    }

    /// Parses `pre a b | per c d` or `per c d`; element names resolve against `alg`.
    pub fn parse(alg: &FiniteAlgebra, text: &str) -> Result<Self> {
        let (pre, per) = match text.split_once('|') {
            Some((p, q)) => (Some(p.trim()), q.trim()),
            None => (None, text.trim()),
        };
        let words = |part: &str, kw: &str| -> Result<Vec<usize>> {
            let mut toks = part.split_whitespace();
            if toks.next() != Some(kw) {
                return Err(Error::InvalidArgument(format!("expected `{kw}` in sequence `{text}`")));
            }
            toks.map(|t| alg.index_of(t)).collect()
        };
        let preperiod = match pre {
            Some(p) => words(p, "pre")?,
            None => Vec::new(),
        };
        Representative::new(preperiod, words(per, "per")?)
    }
}

fn primitive(mut period: Vec<usize>) -> Vec<usize> {
    let n = period.len();
    if let Some(d) = (1..n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d])) {
        period.truncate(d);
    }
    period
}

/// Canonical representative of a cofinite-equality class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpSequence {
    base: Arc<FiniteAlgebra>,
    period: Vec<usize>,
}

impl fmt::Debug for EpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for EpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "per")?;
        for &v in &self.period {
            write!(f, " {}", self.base.element(v))?;
        }
        Ok(())
    }
}

impl Serialize for EpSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EpSequence", 1)?;
        let names: Vec<&str> = self.period.iter().map(|&v| self.base.element(v)).collect();
        st.serialize_field("period", &names)?;
        st.end()
    }
}

impl EpSequence {
    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        &self.base
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    pub fn at(&self, i: usize) -> usize {
        self.period[i % self.period.len()]
    }

    pub fn is_constant(&self) -> bool {
        self.period.len() == 1
    }

    /// Sort key: period length, then period contents.
    fn key(&self) -> (usize, &[usize]) {
        (self.period.len(), &self.period)
    }

    /// Raw form with empty preperiod.
    pub fn representative(&self) -> Representative {
        Representative { preperiod: Vec::new(), period: self.period.clone() }
    }

    fn from_window(base: Arc<FiniteAlgebra>, window: Vec<usize>) -> Self {
        EpSequence { base, period: primitive(window) }
    }
}

/// Drops the preperiod, rotates the period so it starts at index 0, and
/// reduces it to its primitive root.
pub fn canonicalize(base: &Arc<FiniteAlgebra>, raw: &Representative) -> Result<EpSequence> {
    if raw.period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    if let Some(&bad) = raw.preperiod.iter().chain(&raw.period).find(|&&v| v >= base.size()) {
        return Err(Error::ElementOutOfRange { index: bad, size: base.size() });
    }
    let p = raw.period.len();
    let shift = raw.preperiod.len() % p;
    let aligned = (0..p).map(|j| raw.period[(j + p - shift) % p]).collect();
    Ok(EpSequence::from_window(base.clone(), aligned))
}

pub fn canonicalize_names(base: &Arc<FiniteAlgebra>, text: &str) -> Result<EpSequence> {
    canonicalize(base, &Representative::parse(base, text)?)
}

/// The constant sequence at `element`.
pub fn std_embed(base: &Arc<FiniteAlgebra>, element: &str) -> Result<EpSequence> {
    Ok(EpSequence { base: base.clone(), period: vec![base.index_of(element)?] })
}

fn resolve(alg: &FiniteAlgebra, symbol: &str, arity: usize) -> Result<usize> {
    let si = alg.signature().position(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
    if alg.arity(si) != arity {
        return Err(Error::ArityMismatch { symbol: symbol.to_string(), expected: alg.arity(si), found: arity });
    }
    Ok(si)
}

/// Applies `symbol` index by index over one common period.
pub fn pointwise_apply(symbol: &str, args: &[EpSequence], base: &Arc<FiniteAlgebra>) -> Result<EpSequence> {
    if args.iter().any(|a| !Arc::ptr_eq(&a.base, base) && *a.base != **base) {
        return Err(Error::MixedBases);
    }
    let si = resolve(base, symbol, args.len())?;
    let window = args.iter().fold(1, |acc, a| lcm(acc, a.period.len()));
    let mut row = vec![0usize; args.len()];
    let out = (0..window)
        .map(|i| {
            for (r, a) in row.iter_mut().zip(args) {
                *r = a.at(i);
            }
            base.apply(si, &row)
        })
        .collect();
    Ok(EpSequence::from_window(base.clone(), out))
}

/// Applies `symbol` to raw representatives without canonicalizing. The
/// result has preperiod length `max preperiod` and period length `lcm` of periods.
pub fn pointwise_apply_raw(alg: &FiniteAlgebra, symbol: &str, args: &[Representative]) -> Result<Representative> {
    let si = resolve(alg, symbol, args.len())?;
    if args.iter().any(|a| a.period.is_empty()) {
        return Err(Error::EmptyPeriod);
    }
    let d = args.iter().map(|a| a.preperiod.len()).max().unwrap_or(0);
    let p = args.iter().fold(1, |acc, a| lcm(acc, a.period.len()));
    let mut row = vec![0usize; args.len()];
    let values: Vec<usize> = (0..d + p)
        .map(|i| {
            for (r, a) in row.iter_mut().zip(args) {
                *r = a.at(i);
            }
            alg.apply(si, &row)
        })
        .collect();
    Ok(Representative { preperiod: values[..d].to_vec(), period: values[d..].to_vec() })
}

/// Sequences whose components are the given factor sequences, over a product algebra.
pub fn pair_sequences(prod: &RelabeledProduct, parts: &[EpSequence]) -> Result<EpSequence> {
    if parts.len() != prod.factors.len() {
        return Err(Error::InvalidArgument(format!("{} parts for {} factors", parts.len(), prod.factors.len())));
    }
    for (p, f) in parts.iter().zip(&prod.factors) {
        if *p.base != **f {
            return Err(Error::MixedBases);
        }
    }
    let window = parts.iter().fold(1, |acc, a| lcm(acc, a.period.len()));
    let out = (0..window)
        .map(|i| prod.index_of_tuple(&parts.iter().map(|p| p.at(i)).collect::<Vec<_>>()))
        .collect();
    Ok(EpSequence::from_window(prod.product.clone(), out))
}

/// Closure of the constants and some adjoined sequences, with an ordinary
/// algebra view over fresh names `r0, r1, …`.
#[derive(Debug, Clone)]
pub struct GeneratedExtension {
    pub base: Arc<FiniteAlgebra>,
    pub generators: Vec<EpSequence>,
    /// Ordered by period length, then period; the constants come first in carrier order.
    pub members: Vec<EpSequence>,
    pub view: Arc<FiniteAlgebra>,
}

impl GeneratedExtension {
    pub fn index_of(&self, s: &EpSequence) -> Option<usize> {
        self.members.binary_search_by(|m| m.key().cmp(&s.key())).ok()
    }

    /// View names paired with their sequences.
    pub fn relabel_map(&self) -> Vec<(String, &EpSequence)> {
        self.members.iter().enumerate().map(|(i, m)| (self.view.element(i).to_string(), m)).collect()
    }
}

pub const DEFAULT_EXTENSION_BUDGET: usize = 2048;

/// Sub-algebra of the sequences generated by the constants and `gens`.
///
/// Every member is periodic with period dividing the lcm of the generator
/// periods, so the closure runs inside `base^lcm` and stays finite.
pub fn adjoin_generate(base: &Arc<FiniteAlgebra>, gens: &[EpSequence], budget: usize) -> Result<GeneratedExtension> {
    if gens.iter().any(|g| *g.base != **base) {
        return Err(Error::MixedBases);
    }
    let window = gens.iter().fold(1, |acc, g| lcm(acc, g.period.len()));
    if window > 4096 {
        return Err(Error::BudgetExceeded(format!("common period {window}")));
    }
    let mut members: Vec<Vec<usize>> = (0..base.size()).map(|e| vec![e; window]).collect();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, m) in members.iter().enumerate() {
        seen.insert(m.clone(), i);
    }
    for g in gens {
        let w: Vec<usize> = (0..window).map(|i| g.at(i)).collect();
        if !seen.contains_key(&w) {
            seen.insert(w.clone(), members.len());
            members.push(w);
        }
    }
    let over = |n: usize| Error::BudgetExceeded(format!("generated extension exceeds {budget} members ({n} so far)"));
    if members.len() > budget {
        return Err(over(members.len()));
    }
    let symbols = base.signature().symbols();
    let mut done = 0;
    while done < members.len() {
        let before = members.len();
        let snapshot = &members;
        let mut fresh: Vec<Vec<usize>> = symbols
            .par_iter()
            .enumerate()
            .filter(|(_, s)| s.arity > 0)
            .flat_map_iter(|(si, sym)| {
                let combos = table_len(before, sym.arity);
                let seen = &seen;
                (0..combos).filter_map(move |c| {
                    let mut rest = c;
                    let mut args = vec![0usize; sym.arity];
                    for slot in args.iter_mut().rev() {
                        *slot = rest % before;
                        rest /= before;
                    }
                    if args.iter().all(|&a| a < done) {
                        return None;
                    }
                    let mut row = vec![0usize; sym.arity];
                    let w: Vec<usize> = (0..window)
                        .map(|i| {
                            for (r, &a) in row.iter_mut().zip(&args) {
                                *r = snapshot[a][i];
                            }
                            base.apply(si, &row)
                        })
                        .collect();
                    (!seen.contains_key(&w)).then_some(w)
                })
            })
            .collect();
        fresh.sort();
        fresh.dedup();
        for w in fresh {
            seen.insert(w.clone(), members.len());
            members.push(w);
            if members.len() > budget {
                return Err(over(members.len()));
            }
        }
        done = before;
    }

    let mut seqs: Vec<(EpSequence, Vec<usize>)> =
        members.into_iter().map(|w| (EpSequence::from_window(base.clone(), w.clone()), w)).collect();
    seqs.sort_by(|a, b| a.0.key().cmp(&b.0.key()));
    let order: HashMap<&[usize], usize> = seqs.iter().enumerate().map(|(i, (_, w))| (w.as_slice(), i)).collect();
    let n = seqs.len();
    let mut ops = Vec::with_capacity(symbols.len());
    for (si, sym) in symbols.iter().enumerate() {
        let cell = |c: usize| {
            let mut rest = c;
            let mut args = vec![0usize; sym.arity];
            for slot in args.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            let mut row = vec![0usize; sym.arity];
            let w: Vec<usize> = (0..window)
                .map(|i| {
                    for (r, &a) in row.iter_mut().zip(&args) {
                        *r = seqs[a].1[i];
                    }
                    base.apply(si, &row)
                })
                .collect();
            order[w.as_slice()]
        };
        let cells = table_len(n, sym.arity);
        let table: Vec<usize> =
            if cells >= 1024 { (0..cells).into_par_iter().map(cell).collect() } else { (0..cells).map(cell).collect() };
        ops.push((sym.name.clone(), sym.arity, table));
    }
    let members: Vec<EpSequence> = seqs.into_iter().map(|(s, _)| s).collect();
    for m in &members {
        debug_assert!(window % m.period.len() == 0);
    }
    let view = FiniteAlgebra::from_tables(
        format!("{}_ext", base.name()),
        (0..n).map(|i| format!("r{i}")),
        ops,
    )?;
    Ok(GeneratedExtension { base: base.clone(), generators: gens.to_vec(), members, view: Arc::new(view) })
}

/// Sends each member to the constant at its value at `index`; an idempotent
/// endomorphism of the view onto the constants.
pub fn coordinate_retraction(ext: &GeneratedExtension, index: usize) -> Result<Morphism> {
    let map = ext.members.iter().map(|m| m.at(index)).collect();
    let m = Morphism::new(ext.view.clone(), ext.view.clone(), map)?;
    if let crate::morphism::HomCheck::Fails { symbol, .. } = check_homomorphism(&m)? {
        return Err(Error::Precondition(format!("coordinate map at {index} breaks `{symbol}`")));
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct PreservationReport {
    pub base: String,
    pub members: usize,
    pub report: SatisfactionReport,
}

/// Checks that the generated extension satisfies every equation its base does.
pub fn preservation_suite(
    base: &Arc<FiniteAlgebra>,
    eqs: &EquationSet,
    gens: &[EpSequence],
    budget: usize,
) -> Result<PreservationReport> {
    let on_base = satisfies_all(base, eqs)?;
    if !on_base.member {
        let failing: Vec<String> = on_base.failures().map(|v| v.equation.clone()).collect();
        return Err(Error::Precondition(format!(
            "{} does not satisfy {}: {}",
            base.name(),
            eqs.name,
            failing.join("; ")
        )));
    }
    let ext = adjoin_generate(base, gens, budget)?;
    let report = satisfies_all(&ext.view, eqs)?;
    Ok(PreservationReport { base: base.name().to_string(), members: ext.members.len(), report })
}
