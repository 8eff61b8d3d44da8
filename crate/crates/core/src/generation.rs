//! Subalgebra generation by stage iteration, subuniverse enumeration and
//! finite-case generation reports.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{is_subuniverse_indices, table_len, FiniteAlgebra};
use crate::error::{Error, Result};

/// Stages `A_0 ⊊ A_1 ⊊ … ⊊ A_k` of a closure run; the last stage is a fixpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationTrace {
    pub generators: Vec<usize>,
    pub stages: Vec<Vec<usize>>,
    pub fixpoint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    /// Members in carrier order.
    pub members: Vec<usize>,
    pub trace: GenerationTrace,
}

impl Generated {
    /// No seed and no nullary symbols: the closure is empty and carries no algebra.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn describe(&self, alg: &FiniteAlgebra) -> String {
        if self.is_empty() {
            "empty (not an algebra)".to_string()
        } else {
            let names: Vec<&str> = self.members.iter().map(|&m| alg.element(m)).collect();
            format!("{{{}}}", names.join(", "))
        }
    }
}

fn to_list(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// All outputs of one stage: `{ o(x⃗) : o in signature, x⃗ over current }`.
fn stage_outputs(alg: &FiniteAlgebra, current: &[usize]) -> Vec<bool> {
    let k = alg.size();
    let mut out = vec![false; k];
    for (si, sym) in alg.signature().symbols().iter().enumerate() {
        let total = table_len(current.len(), sym.arity);
        let image = |i: usize| {
            let mut rest = i;
            let mut args = vec![0usize; sym.arity];
            for slot in args.iter_mut().rev() {
                *slot = current[rest % current.len()];
                rest /= current.len();
            }
            alg.apply(si, &args)
        };
        if sym.arity > 0 && current.is_empty() {
            continue;
        }
        if total < 4096 {
            for i in 0..total {
                out[image(i)] = true;
            }
        } else {
            let part = (0..total)
                .into_par_iter()
                .with_min_len(1024)
                .fold(
                    || vec![false; k],
                    |mut acc, i| {
                        acc[image(i)] = true;
                        acc
                    },
                )
                .reduce(
                    || vec![false; k],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x |= y;
                        }
                        a
                    },
                );
            for (x, y) in out.iter_mut().zip(part) {
                *x |= y;
            }
        }
    }
    out
}

/// The least subuniverse containing `seed` and every nullary value, with its stage trace.
pub fn generate(alg: &FiniteAlgebra, seed: &[usize]) -> Result<Generated> {
    let k = alg.size();
    let mut mask = vec![false; k];
    for &s in seed {
        if s >= k {
            return Err(Error::ElementOutOfRange { index: s, size: k });
        }
        mask[s] = true;
    }
    for v in alg.nullary_values() {
        mask[v] = true;
    }
    let mut generators: Vec<usize> = seed.to_vec();
    generators.sort_unstable();
    generators.dedup();
    let mut stages = vec![to_list(&mask)];
    loop {
        let current = stages.last().unwrap();
        let outputs = stage_outputs(alg, current);
        let mut grew = false;
        for (m, o) in mask.iter_mut().zip(outputs) {
            if o && !*m {
                *m = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
        stages.push(to_list(&mask));
    }
    let members = stages.last().unwrap().clone();
    Ok(Generated { members, trace: GenerationTrace { generators, stages, fixpoint: true } })
}

pub fn generate_names<S: AsRef<str>>(alg: &FiniteAlgebra, seed: &[S]) -> Result<Generated> {
    generate(alg, &alg.indices_of(seed)?)
}

/// Compares `generate(seed)` with the union of `generate(F)` over finite `F ⊆ seed`.
///
/// Every subset is visited when `|seed| ≤ 12`; otherwise 256 subsets drawn with
/// a generator seeded with `rng_seed`, plus the seed itself.
pub fn directed_union_check(alg: &FiniteAlgebra, seed: &[usize], rng_seed: u64) -> Result<bool> {
    let mut seed = seed.to_vec();
    seed.sort_unstable();
    seed.dedup();
    let whole = generate(alg, &seed)?;
    let mut union = vec![false; alg.size()];
    let mut absorb = |f: &[usize]| -> Result<bool> {
        let g = generate(alg, f)?;
        for &m in &g.members {
            if whole.members.binary_search(&m).is_err() {
                return Ok(false);
            }
            union[m] = true;
        }
        Ok(true)
    };
    if seed.len() <= 12 {
        for mask in 0u32..1 << seed.len() {
            let f: Vec<usize> =
                seed.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
            if !absorb(&f)? {
                return Ok(false);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut samples = vec![seed.clone()];
        for _ in 0..256 {
            let size = rng.gen_range(0..=seed.len());
            let mut s = seed.clone();
            s.shuffle(&mut rng);
            s.truncate(size);
            samples.push(s);
        }
        for f in samples {
            if !absorb(&f)? {
                return Ok(false);
            }
        }
    }
    Ok(to_list(&union) == whole.members)
}

/// Every subuniverse (the empty set included when there are no nullary symbols),
/// by brute-force closure checks over all subsets. Refused above `max_size` elements.
pub fn subuniverses(alg: &FiniteAlgebra, max_size: usize) -> Result<Vec<Vec<usize>>> {
    let n = alg.size();
    if n > max_size || n >= 32 {
        return Err(Error::BudgetExceeded(format!(
            "subuniverse enumeration limited to {max_size} elements, carrier has {n}"
        )));
    }
    let mut out: Vec<Vec<usize>> = (0u64..1 << n)
        .into_par_iter()
        .filter_map(|m| {
            let s: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            match is_subuniverse_indices(alg, &s) {
                Ok(c) if c.is_closed() => Some(s),
                _ => None,
            }
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubuniverseLattice {
    /// Ordered by size, then lexicographically by carrier position.
    pub members: Vec<Vec<String>>,
    /// Covering pairs `(lower, upper)` as indices into `members`.
    pub covers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub algebra: String,
    pub minimum_generating_set: Vec<String>,
    /// Finite carriers make every generated subalgebra finite.
    pub locally_finite: bool,
    pub finitely_generated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subuniverse_lattice: Option<SubuniverseLattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_refused: Option<String>,
}

/// Exhaustive search for a smallest generating set, by increasing size.
pub fn minimum_generating_set(alg: &FiniteAlgebra) -> Result<Vec<usize>> {
    let n = alg.size();
    for size in 0..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if generate(alg, &combo)?.members.len() == n {
                return Ok(combo);
            }
            // next combination in lexicographic order
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if combo[i] < n - size + i {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if size == 0 || i == usize::MAX {
                break;
            }
        }
    }
    unreachable!("the full carrier generates itself")
}

pub fn finiteness_report(alg: &FiniteAlgebra) -> Result<FinitenessReport> {
    let gens = minimum_generating_set(alg)?;
    let (lattice, refused) = if alg.size() <= 5 {
        let subs = subuniverses(alg, 5)?;
        let mut covers = Vec::new();
        for (i, a) in subs.iter().enumerate() {
            for (j, b) in subs.iter().enumerate() {
                let below = a.len() < b.len() && a.iter().all(|x| b.contains(x));
                if !below {
                    continue;
                }
                let between = subs.iter().any(|c| {
                    c.len() > a.len()
                        && c.len() < b.len()
                        && a.iter().all(|x| c.contains(x))
                        && c.iter().all(|x| b.contains(x))
                });
                if !between {
                    covers.push((i, j));
                }
            }
        }
        let members = subs
            .iter()
            .map(|s| s.iter().map(|&m| alg.element(m).to_string()).collect())
            .collect();
        (Some(SubuniverseLattice { members, covers }), None)
    } else {
        (None, Some(format!("subuniverse lattice computed only for carriers of at most 5 elements, found {}", alg.size())))
    };
    Ok(FinitenessReport {
        algebra: alg.name().to_string(),
        minimum_generating_set: gens.iter().map(|&g| alg.element(g).to_string()).collect(),
        locally_finite: true,
        finitely_generated: true,
        subuniverse_lattice: lattice,
        lattice_refused: refused,
    })
}
