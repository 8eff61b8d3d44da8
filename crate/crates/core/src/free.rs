//! Free semigroups truncated at a word-length bound, with partial
//! concatenation, and a search for length-bounded retractions.

use serde::Serialize;

use crate::algebra::is_identifier;
use crate::error::{Error, Result};

pub const FREE_ELEMENT_BUDGET: usize = 100_000;

/// Nonempty words of length at most `bound`, indexed in length-then-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedFreeSemigroup {
    generators: Vec<String>,
    bound: usize,
    /// `offsets[l]`: index of the first word of length `l` (`offsets[0]` unused).
    offsets: Vec<usize>,
    /// `powers[l] = g^l`.
    powers: Vec<usize>,
}

impl TruncatedFreeSemigroup {
    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.offsets[self.bound + 1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of words of length at most `l`.
    pub fn count_up_to(&self, l: usize) -> usize {
        self.offsets[l.min(self.bound) + 1]
    }

    pub fn length(&self, w: usize) -> usize {
        self.offsets.partition_point(|&o| o <= w) - 1
    }

    fn value(&self, w: usize) -> (usize, usize) {
        let l = self.length(w);
        (l, w - self.offsets[l])
    }

    pub fn word_from_letters(&self, letters: &[usize]) -> Option<usize> {
        let l = letters.len();
        if l == 0 || l > self.bound || letters.iter().any(|&c| c >= self.generators.len()) {
            return None;
        }
        let g = self.generators.len();
        Some(self.offsets[l] + letters.iter().fold(0, |acc, &c| acc * g + c))
    }

    pub fn letters(&self, w: usize) -> Vec<usize> {
        let (l, mut v) = self.value(w);
        let g = self.generators.len();
        let mut out = vec![0usize; l];
        for slot in out.iter_mut().rev() {
            *slot = v % g;
            v /= g;
        }
        out
    }

    /// `uv`, or `None` when the combined length exceeds the bound.
    pub fn concat(&self, u: usize, v: usize) -> Option<usize> {
        let (lu, xu) = self.value(u);
        let (lv, xv) = self.value(v);
        (lu + lv <= self.bound).then(|| self.offsets[lu + lv] + xu * self.powers[lv] + xv)
    }

    /// Letters joined directly when every generator is one character, else with `.`.
    pub fn display(&self, w: usize) -> String {
        let sep = if self.generators.iter().all(|g| g.len() == 1) { "" } else { "." };
        self.letters(w).iter().map(|&c| self.generators[c].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Prefix of length `p` and the remaining suffix.
    fn split(&self, w: usize, p: usize) -> (usize, usize) {
        let (l, x) = self.value(w);
        let tail = self.powers[l - p];
        (self.offsets[p] + x / tail, self.offsets[l - p] + x % tail)
    }
}

/// Words over `generators` up to length `bound`.
pub fn build_truncated<S: AsRef<str>>(generators: &[S], bound: usize) -> Result<TruncatedFreeSemigroup> {
    let generators: Vec<String> = generators.iter().map(|g| g.as_ref().to_string()).collect();
    if generators.is_empty() || bound == 0 {
        return Err(Error::InvalidArgument("need at least one generator and a bound of at least 1".into()));
    }
    for (i, g) in generators.iter().enumerate() {
        if !is_identifier(g) || generators[..i].contains(g) {
            return Err(Error::InvalidArgument(format!("bad or repeated generator `{g}`")));
        }
    }
    let g = generators.len();
    let mut powers = vec![1usize];
    let mut offsets = vec![0usize, 0];
    for l in 1..=bound {
        let p = powers[l - 1]
            .checked_mul(g)
            .filter(|&p| offsets[l] + p <= FREE_ELEMENT_BUDGET)
            .ok_or_else(|| Error::BudgetExceeded(format!("more than {FREE_ELEMENT_BUDGET} words")))?;
        powers.push(p);
        offsets.push(offsets[l] + p);
    }
    Ok(TruncatedFreeSemigroup { generators, bound, offsets, powers })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum SearchStep {
    /// `r(word) = r(left)·r(right) = image`.
    Forced { word: String, left: String, right: String, image: String },
    Choice { word: String, image: String },
    /// `r(left)·r(right)` has length `length`, above the image bound, or disagrees with an earlier split.
    Conflict { word: String, left: String, right: String, product: String, length: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RetractionSearch {
    pub generators: Vec<String>,
    pub bound: usize,
    pub image_bound: usize,
    /// Word-to-word assignment, when a retraction exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retraction: Option<Vec<(String, String)>>,
    /// Length of the word at which the first contradiction appeared.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_conflict_length: Option<usize>,
    pub nodes: u64,
    pub transcript: Vec<SearchStep>,
    /// True when the transcript was cut at the step cap.
    pub transcript_truncated: bool,
}

const TRANSCRIPT_CAP: usize = 10_000;

struct Retract<'a> {
    t: &'a TruncatedFreeSemigroup,
    k: usize,
    image: Vec<Option<usize>>,
    transcript: Vec<SearchStep>,
    truncated: bool,
    first_conflict: Option<usize>,
    nodes: u64,
}

impl Retract<'_> {
    fn log(&mut self, step: SearchStep) {
        if self.transcript.len() < TRANSCRIPT_CAP {
            self.transcript.push(step);
        } else {
            self.truncated = true;
        }
    }

    /// Image of `w` forced by its splits, `Err(())` on contradiction, `Ok(None)` if unconstrained.
    fn forced(&mut self, w: usize) -> std::result::Result<Option<(usize, usize, usize)>, ()> {
        let t = self.t;
        let l = t.length(w);
        let mut found: Option<(usize, usize, usize)> = None;
        for p in 1..l {
            let (u, v) = t.split(w, p);
            let (ru, rv) = (self.image[u].unwrap(), self.image[v].unwrap());
            let len = t.length(ru) + t.length(rv);
            if len > t.bound {
                continue;
            }
            let prod = t.concat(ru, rv).unwrap();
            let clash = match found {
                _ if len > self.k => Some(format!("length {len} exceeds image bound {}", self.k)),
                Some((img, ..)) if img != prod => {
                    Some(format!("disagrees with the earlier forced image {}", t.display(img)))
                }
                _ => None,
            };
            if let Some(reason) = clash {
                self.first_conflict.get_or_insert(l);
                self.log(SearchStep::Conflict {
                    word: t.display(w),
                    left: t.display(u),
                    right: t.display(v),
                    product: t.display(prod),
                    length: len,
                    reason,
                });
                return Err(());
            }
            found.get_or_insert((prod, u, v));
        }
        Ok(found)
    }

    fn dfs(&mut self, w: usize) -> bool {
        self.nodes += 1;
        if w == self.t.len() {
            return true;
        }
        let t = self.t;
        match self.forced(w) {
            Err(()) => false,
            Ok(Some((img, u, v))) => {
                self.log(SearchStep::Forced {
                    word: t.display(w),
                    left: t.display(u),
                    right: t.display(v),
                    image: t.display(img),
                });
                self.image[w] = Some(img);
                if self.dfs(w + 1) {
                    return true;
                }
                self.image[w] = None;
                false
            }
            Ok(None) => {
                for img in 0..t.count_up_to(self.k) {
                    self.log(SearchStep::Choice { word: t.display(w), image: t.display(img) });
                    self.image[w] = Some(img);
                    if self.dfs(w + 1) {
                        return true;
                    }
                }
                self.image[w] = None;
                false
            }
        }
    }
}

/// Looks for `r` onto the words of length at most `k` that fixes them and
/// satisfies `r(uv) = r(u)r(v)` whenever `uv` and `r(u)r(v)` are both defined.
///
/// Words are assigned in length-lexicographic order; every split of a word
/// involves strictly shorter words, so each split either forces the image or
/// is skipped by the guard.
pub fn search_bounded_retraction(t: &TruncatedFreeSemigroup, k: usize) -> Result<RetractionSearch> {
    if k == 0 || k > t.bound() {
        return Err(Error::InvalidArgument(format!("image bound must lie in 1..={}", t.bound())));
    }
    let fixed = t.count_up_to(k);
    let mut image = vec![None; t.len()];
    for (w, slot) in image.iter_mut().enumerate().take(fixed) {
        *slot = Some(w);
    }
    let mut s = Retract { t, k, image, transcript: Vec::new(), truncated: false, first_conflict: None, nodes: 0 };
    let found = s.dfs(fixed);
    let retraction = found.then(|| {
        s.image
            .iter()
            .enumerate()
            .map(|(w, r)| (t.display(w), t.display(r.unwrap())))
            .collect()
    });
    Ok(RetractionSearch {
        generators: t.generators().to_vec(),
        bound: t.bound(),
        image_bound: k,
        retraction,
        first_conflict_length: if found { None } else { s.first_conflict },
        nodes: s.nodes,
        transcript: s.transcript,
        transcript_truncated: s.truncated,
    })
}
