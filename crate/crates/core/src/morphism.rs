//! Homomorphisms and partial homomorphisms between finite algebras: checking,
//! enumeration, retraction search and isomorphism testing.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{table_len, FiniteAlgebra, Subuniverse, TupleIter};
use crate::error::{Error, Result};
use crate::generation::generate;
use crate::logic::Binding;

/// A total map between carriers; structural properties are recomputed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismStatus {
    pub homomorphism: bool,
    pub injective: bool,
    pub surjective: bool,
    /// Only reported for endomorphisms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<bool>,
}

/// `f(o(z⃗))` against `o(f(z⃗))` for the first offending cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomCheck {
    Holds,
    Fails { symbol: String, args: Vec<String>, lhs: String, rhs: String },
}

impl HomCheck {
    pub fn holds(&self) -> bool {
        matches!(self, HomCheck::Holds)
    }
}

impl Morphism {
    pub fn new(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::NonTotalMap(format!(
                "{} of {} source elements mapped",
                map.len(),
                source.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.size()) {
            return Err(Error::ElementOutOfRange { index: bad, size: target.size() });
        }
        Ok(Morphism { source, target, map })
    }

    /// Builds a map from `(source element, target element)` pairs covering the whole source.
    pub fn from_pairs<S: AsRef<str>, T: AsRef<str>>(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        pairs: &[(S, T)],
    ) -> Result<Self> {
        let mut map = vec![None; source.size()];
        for (a, b) in pairs {
            let i = source.index_of(a.as_ref())?;
            let j = target.index_of(b.as_ref())?;
            if map[i].is_some_and(|old| old != j) {
                return Err(Error::InvalidArgument(format!("`{}` mapped twice", a.as_ref())));
            }
            map[i] = Some(j);
        }
        let missing: Vec<&str> =
            (0..source.size()).filter(|&i| map[i].is_none()).map(|i| source.element(i)).collect();
        if !missing.is_empty() {
            return Err(Error::NonTotalMap(format!("no image for {}", missing.join(", "))));
        }
        Self::new(source, target, map.into_iter().map(Option::unwrap).collect())
    }

    pub fn identity(alg: Arc<FiniteAlgebra>) -> Self {
        let map = (0..alg.size()).collect();
        Morphism { source: alg.clone(), target: alg, map }
    }

    pub fn source(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            seen[v] = true;
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    pub fn is_endomorphism(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target) || self.source == self.target
    }

    pub fn status(&self) -> Result<MorphismStatus> {
        let mut hit = vec![false; self.target.size()];
        let mut injective = true;
        for &v in &self.map {
            injective &= !hit[v];
            hit[v] = true;
        }
        let idempotent = self.is_endomorphism().then(|| self.map.iter().all(|&v| self.map[v] == v));
        Ok(MorphismStatus {
            homomorphism: check_homomorphism(self)?.holds(),
            injective,
            surjective: hit.iter().all(|&h| h),
            idempotent,
        })
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Morphism) -> Result<Morphism> {
        if *first.target != *self.source {
            return Err(Error::InvalidArgument("composition of non-adjacent maps".into()));
        }
        let map = first.map.iter().map(|&x| self.map[x]).collect();
        Morphism::new(first.source.clone(), self.target.clone(), map)
    }

    pub fn named(&self) -> Binding {
        Binding(
            self.map
                .iter()
                .enumerate()
                .map(|(i, &v)| (self.source.element(i).to_string(), self.target.element(v).to_string()))
                .collect(),
        )
    }
}

/// A map defined on a subset of the source carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMorphism {
    pub source: Arc<FiniteAlgebra>,
    pub target: Arc<FiniteAlgebra>,
    pub map: Vec<Option<usize>>,
}

impl PartialMorphism {
    pub fn from_pairs<S: AsRef<str>, T: AsRef<str>>(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        pairs: &[(S, T)],
    ) -> Result<Self> {
        let mut map = vec![None; source.size()];
        for (a, b) in pairs {
            map[source.index_of(a.as_ref())?] = Some(target.index_of(b.as_ref())?);
        }
        Ok(PartialMorphism { source, target, map })
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i].is_some()).collect()
    }
}

impl From<&Morphism> for PartialMorphism {
    fn from(m: &Morphism) -> Self {
        PartialMorphism {
            source: m.source.clone(),
            target: m.target.clone(),
            map: m.map.iter().map(|&v| Some(v)).collect(),
        }
    }
}

fn guarded_check(src: &FiniteAlgebra, dst: &FiniteAlgebra, map: &[Option<usize>]) -> Result<HomCheck> {
    let align = src.signature().align_to(dst.signature())?;
    for &v in map.iter().flatten() {
        if v >= dst.size() {
            return Err(Error::ElementOutOfRange { index: v, size: dst.size() });
        }
    }
    for (si, sym) in src.signature().symbols().iter().enumerate() {
        let mut image = vec![0usize; sym.arity];
        'cells: for args in TupleIter::new(src.size(), sym.arity) {
            for (slot, &a) in image.iter_mut().zip(&args) {
                match map[a] {
                    Some(v) => *slot = v,
                    None => continue 'cells,
                }
            }
            let Some(lhs) = map[src.apply(si, &args)] else { continue };
            let rhs = dst.apply(align[si], &image);
            if lhs != rhs {
                return Ok(HomCheck::Fails {
                    symbol: sym.name.clone(),
                    args: args.iter().map(|&a| src.element(a).to_string()).collect(),
                    lhs: dst.element(lhs).to_string(),
                    rhs: dst.element(rhs).to_string(),
                });
            }
        }
    }
    Ok(HomCheck::Holds)
}

/// Checks every symbol and argument tuple; symbols are matched by name and arity.
pub fn check_homomorphism(m: &Morphism) -> Result<HomCheck> {
    let map: Vec<Option<usize>> = m.map.iter().map(|&v| Some(v)).collect();
    guarded_check(&m.source, &m.target, &map)
}

/// Only cells whose arguments and result all lie in the domain are checked.
pub fn check_partial_homomorphism(m: &PartialMorphism) -> Result<HomCheck> {
    if m.map.len() != m.source.size() {
        return Err(Error::InvalidArgument("partial map length differs from source size".into()));
    }
    guarded_check(&m.source, &m.target, &m.map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomMode {
    Count,
    List,
    First,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomEnumeration {
    pub count: u64,
    /// Sorted lexicographically; empty in count mode.
    pub maps: Vec<Vec<usize>>,
}

/// Partial map, per-target use counts and assignment trail of a search node.
type Snapshot = (Vec<Option<usize>>, Vec<u32>, Vec<usize>);

pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// Backtracking search state for maps `src → dst` subject to the homomorphism
/// condition, per-element candidate sets and optional injectivity.
struct Search<'a> {
    src: &'a FiniteAlgebra,
    dst: &'a FiniteAlgebra,
    align: Vec<usize>,
    /// `watch[x]`: cells `(symbol, tuple index)` with `x` among the arguments.
    watch: Vec<Vec<(usize, usize)>>,
    nullary_cells: Vec<usize>,
    allowed: Vec<Vec<bool>>,
    injective: bool,
    order: Vec<usize>,
}

struct State {
    map: Vec<Option<usize>>,
    used: Vec<u32>,
    trail: Vec<usize>,
    nodes: u64,
}

fn decode(mut t: usize, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = t % k;
        t /= k;
    }
}

impl<'a> Search<'a> {
    fn new(src: &'a FiniteAlgebra, dst: &'a FiniteAlgebra, allowed: Vec<Vec<bool>>, injective: bool) -> Result<Self> {
        let align = src.signature().align_to(dst.signature())?;
        let k = src.size();
        let mut watch = vec![Vec::new(); k];
        let mut degree = vec![0usize; k];
        let mut nullary_cells = Vec::new();
        let mut args = Vec::new();
        for (si, sym) in src.signature().symbols().iter().enumerate() {
            if sym.arity == 0 {
                nullary_cells.push(si);
                continue;
            }
            args.resize(sym.arity, 0);
            for t in 0..table_len(k, sym.arity) {
                decode(t, k, &mut args);
                let mut seen: Vec<usize> = args.clone();
                seen.sort_unstable();
                seen.dedup();
                for &a in &seen {
                    watch[a].push((si, t));
                    degree[a] += 1;
                }
                degree[src.table(si)[t]] += 1;
            }
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
        Ok(Search { src, dst, align, watch, nullary_cells, allowed, injective, order })
    }

    fn fresh_state(&self) -> State {
        State { map: vec![None; self.src.size()], used: vec![0; self.dst.size()], trail: Vec::new(), nodes: 0 }
    }

    fn undo(&self, st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let x = st.trail.pop().unwrap();
            let v = st.map[x].take().unwrap();
            st.used[v] -= 1;
        }
    }

    /// Assigns `x ↦ v` and propagates forced images; false on conflict.
    fn assign(&self, st: &mut State, x: usize, v: usize) -> bool {
        let mut queue = vec![(x, v)];
        let mut args = Vec::new();
        let mut image = Vec::new();
        while let Some((x, v)) = queue.pop() {
            match st.map[x] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            if !self.allowed[x][v] || (self.injective && st.used[v] > 0) {
                return false;
            }
            st.map[x] = Some(v);
            st.used[v] += 1;
            st.trail.push(x);
            for &(si, t) in &self.watch[x] {
                let arity = self.src.arity(si);
                args.resize(arity, 0);
                image.resize(arity, 0);
                decode(t, self.src.size(), &mut args);
                let mut complete = true;
                for (slot, &a) in image.iter_mut().zip(&args) {
                    match st.map[a] {
                        Some(w) => *slot = w,
                        None => {
                            complete = false;
                            break;
                        }
                    }
                }
                if !complete {
                    continue;
                }
                let want = self.dst.apply(self.align[si], &image);
                let out = self.src.table(si)[t];
                match st.map[out] {
                    Some(w) if w != want => return false,
                    Some(_) => {}
                    None => queue.push((out, want)),
                }
            }
        }
        true
    }

    /// Forces nullary images; false if they already conflict.
    fn root(&self, st: &mut State) -> bool {
        for &si in &self.nullary_cells {
            let c = self.src.apply(si, &[]);
            let c2 = self.dst.apply(self.align[si], &[]);
            if !self.assign(st, c, c2) {
                return false;
            }
        }
        true
    }

    fn next_var(&self, st: &State, lexical: bool) -> Option<usize> {
        if lexical {
            (0..self.src.size()).find(|&x| st.map[x].is_none())
        } else {
            self.order.iter().copied().find(|&x| st.map[x].is_none())
        }
    }

    /// Depth-first search; `visit` returns false to stop.
    fn dfs(
        &self,
        st: &mut State,
        budget: u64,
        lexical: bool,
        visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
    ) -> Result<bool> {
        st.nodes += 1;
        if st.nodes > budget {
            return Err(Error::BudgetExceeded(format!("homomorphism search exceeded {budget} nodes")));
        }
        let Some(x) = self.next_var(st, lexical) else {
            return Ok(visit(&st.map));
        };
        for v in 0..self.dst.size() {
            let mark = st.trail.len();
            if self.assign(st, x, v) && !self.dfs(st, budget, lexical, visit)? {
                self.undo(st, mark);
                return Ok(false);
            }
            self.undo(st, mark);
        }
        Ok(true)
    }

    fn run(&self, mode: HomMode, budget: u64) -> Result<HomEnumeration> {
        let mut root = self.fresh_state();
        if self.src.size() == 0 || !self.root(&mut root) {
            return Ok(HomEnumeration { count: 0, maps: Vec::new() });
        }
        let collect = |m: &[Option<usize>]| m.iter().map(|v| v.unwrap()).collect::<Vec<_>>();
        if mode == HomMode::First {
            let mut found = None;
            self.dfs(&mut root, budget, true, &mut |m| {
                found = Some(collect(m));
                false
            })?;
            let maps: Vec<_> = found.into_iter().collect();
            return Ok(HomEnumeration { count: maps.len() as u64, maps });
        }
        // split on the first branching variable so subtrees run in parallel
        let Some(x) = self.next_var(&root, false) else {
            let maps = if mode == HomMode::List { vec![collect(&root.map)] } else { Vec::new() };
            return Ok(HomEnumeration { count: 1, maps });
        };
        let seeded: Vec<Snapshot> =
            (0..self.dst.size()).map(|_| (root.map.clone(), root.used.clone(), root.trail.clone())).collect();
        let parts = seeded
            .into_par_iter()
            .enumerate()
            .map(|(v, (map, used, trail))| -> Result<(u64, Vec<Vec<usize>>)> {
                let mut st = State { map, used, trail, nodes: 0 };
                if !self.assign(&mut st, x, v) {
                    return Ok((0, Vec::new()));
                }
                let mut count = 0u64;
                let mut maps = Vec::new();
                self.dfs(&mut st, budget, false, &mut |m| {
                    count += 1;
                    if mode == HomMode::List {
                        maps.push(collect(m));
                    }
                    true
                })?;
                Ok((count, maps))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut count = 0;
        let mut maps = Vec::new();
        for (c, m) in parts {
            count += c;
            maps.extend(m);
        }
        maps.sort();
        Ok(HomEnumeration { count, maps })
    }
}

fn unrestricted(src: &FiniteAlgebra, dst: &FiniteAlgebra) -> Vec<Vec<bool>> {
    vec![vec![true; dst.size()]; src.size()]
}

/// All homomorphisms `src → dst`, by backtracking with forced-image propagation.
pub fn enumerate_homomorphisms(
    src: &FiniteAlgebra,
    dst: &FiniteAlgebra,
    mode: HomMode,
    budget: u64,
) -> Result<HomEnumeration> {
    Search::new(src, dst, unrestricted(src, dst), false)?.run(mode, budget)
}

/// As [`enumerate_homomorphisms`] in list mode, wrapped as morphisms.
pub fn homomorphisms(src: &Arc<FiniteAlgebra>, dst: &Arc<FiniteAlgebra>, budget: u64) -> Result<Vec<Morphism>> {
    let e = enumerate_homomorphisms(src, dst, HomMode::List, budget)?;
    Ok(e.maps.into_iter().map(|map| Morphism { source: src.clone(), target: dst.clone(), map }).collect())
}

/// Endomorphisms fixing `image` pointwise with range exactly `image`.
pub fn find_retractions(alg: &Arc<FiniteAlgebra>, image: &Subuniverse<'_>, budget: u64) -> Result<Vec<Morphism>> {
    if image.parent() != alg.as_ref() {
        return Err(Error::InvalidArgument("subuniverse of a different algebra".into()));
    }
    let k = alg.size();
    let mut allowed = vec![vec![false; k]; k];
    for (x, row) in allowed.iter_mut().enumerate() {
        if image.contains(x) {
            row[x] = true;
        } else {
            for &s in image.members() {
                row[s] = true;
            }
        }
    }
    let e = Search::new(alg, alg, allowed, false)?.run(HomMode::List, budget)?;
    Ok(e.maps.into_iter().map(|map| Morphism { source: alg.clone(), target: alg.clone(), map }).collect())
}

/// Name-based entry point for [`find_retractions`] that verifies closure first.
pub fn find_retractions_onto<S: AsRef<str>>(
    alg: &Arc<FiniteAlgebra>,
    image: &[S],
    budget: u64,
) -> Result<Vec<Morphism>> {
    let sub = Subuniverse::from_names(alg, image)?;
    find_retractions(alg, &sub, budget)
}

/// Per-element invariants preserved by isomorphisms: size of the generated
/// subalgebra and, per symbol, how often the element occurs as a value and
/// whether it is a fixed point of the unary operations.
fn invariants(alg: &FiniteAlgebra) -> Result<Vec<Vec<usize>>> {
    let mut inv: Vec<Vec<usize>> = Vec::with_capacity(alg.size());
    for x in 0..alg.size() {
        inv.push(vec![generate(alg, &[x])?.members.len()]);
    }
    let mut syms: Vec<usize> = (0..alg.signature().len()).collect();
    syms.sort_by(|&a, &b| alg.signature().symbols()[a].name.cmp(&alg.signature().symbols()[b].name));
    for si in syms {
        let mut hits = vec![0usize; alg.size()];
        for &v in alg.table(si) {
            hits[v] += 1;
        }
        for (x, h) in hits.into_iter().enumerate() {
            inv[x].push(h);
            if alg.arity(si) == 1 {
                inv[x].push(usize::from(alg.apply(si, &[x]) == x));
            }
        }
    }
    Ok(inv)
}

/// One isomorphism `a → b` if any exists.
pub fn check_isomorphism(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, budget: u64) -> Result<Option<Morphism>> {
    a.signature().align_to(b.signature())?;
    if a.size() != b.size() {
        return Ok(None);
    }
    let (ia, ib) = (invariants(a)?, invariants(b)?);
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(None);
    }
    let allowed = ia.iter().map(|x| ib.iter().map(|y| x == y).collect()).collect();
    let e = Search::new(a, b, allowed, true)?.run(HomMode::First, budget)?;
    let Some(map) = e.maps.into_iter().next() else { return Ok(None) };
    let m = Morphism { source: a.clone(), target: b.clone(), map };
    let mut inverse = vec![0usize; b.size()];
    for (x, &y) in m.map.iter().enumerate() {
        inverse[y] = x;
    }
    let inv = Morphism { source: b.clone(), target: a.clone(), map: inverse };
    debug_assert!(check_homomorphism(&inv).map(|c| c.holds()).unwrap_or(false));
    if !check_homomorphism(&inv)?.holds() {
        return Ok(None);
    }
    Ok(Some(m))
}
