//! Term mappings and the satisfaction relation.

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::term::{Equation, EquationSet, Term};

/// A term with symbol names resolved against one algebra's signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompiledTerm {
    Var(usize),
    App(usize, Vec<CompiledTerm>),
}

impl CompiledTerm {
    pub fn compile(alg: &FiniteAlgebra, term: &Term) -> Result<Self> {
        match term {
            Term::Var(v) => Ok(CompiledTerm::Var(*v)),
            Term::App(name, args) => {
                let sym = alg
                    .signature()
                    .position(name)
                    .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                let expected = alg.arity(sym);
                if expected != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: name.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                let args = args.iter().map(|a| Self::compile(alg, a)).collect::<Result<_>>()?;
                Ok(CompiledTerm::App(sym, args))
            }
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            CompiledTerm::Var(v) => Some(*v),
            CompiledTerm::App(_, args) => args.iter().filter_map(Self::max_var).max(),
        }
    }

    /// Structural evaluation; `lookups` is incremented once per application node.
    pub fn eval_counted(&self, alg: &FiniteAlgebra, binding: &[usize], lookups: &mut usize) -> usize {
        match self {
            CompiledTerm::Var(v) => binding[*v],
            CompiledTerm::App(sym, args) => {
                let mut vals = [0usize; 8];
                let out = if args.len() <= vals.len() {
                    for (slot, a) in vals.iter_mut().zip(args) {
                        *slot = a.eval_counted(alg, binding, lookups);
                    }
                    alg.apply(*sym, &vals[..args.len()])
                } else {
                    let vals: Vec<usize> =
                        args.iter().map(|a| a.eval_counted(alg, binding, lookups)).collect();
                    alg.apply(*sym, &vals)
                };
                *lookups += 1;
                out
            }
        }
    }

    pub fn eval(&self, alg: &FiniteAlgebra, binding: &[usize]) -> usize {
        let mut n = 0;
        self.eval_counted(alg, binding, &mut n)
    }
}

/// Evaluates the term mapping of `term` at `binding` (variable index to carrier index).
pub fn eval_term(alg: &FiniteAlgebra, term: &Term, binding: &[usize]) -> Result<usize> {
    eval_term_counted(alg, term, binding).map(|(v, _)| v)
}

/// As [`eval_term`], also returning the number of table lookups performed.
pub fn eval_term_counted(alg: &FiniteAlgebra, term: &Term, binding: &[usize]) -> Result<(usize, usize)> {
    let compiled = CompiledTerm::compile(alg, term)?;
    if let Some(m) = compiled.max_var() {
        if m >= binding.len() {
            return Err(Error::UnboundVariable(m));
        }
    }
    if let Some(&bad) = binding.iter().find(|&&b| b >= alg.size()) {
        return Err(Error::ElementOutOfRange { index: bad, size: alg.size() });
    }
    let mut lookups = 0;
    let v = compiled.eval_counted(alg, binding, &mut lookups);
    Ok((v, lookups))
}

/// Variable-to-element assignment, serialized as an ordered JSON object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding(pub Vec<(String, String)>);

impl Serialize for Binding {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub equation: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Binding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

fn decode_binding(mut index: usize, k: usize, n: usize, out: &mut [usize]) {
    for slot in out[..n].iter_mut().rev() {
        *slot = index % k;
        index /= k;
    }
}

/// Checks `eq` under every binding of its declared variables.
///
/// The reported counterexample is the first failing binding in lexicographic
/// order (first variable most significant), whatever the worker count.
pub fn satisfies(alg: &FiniteAlgebra, eq: &Equation) -> Result<Verdict> {
    let lhs = CompiledTerm::compile(alg, &eq.lhs)?;
    let rhs = CompiledTerm::compile(alg, &eq.rhs)?;
    let n = eq.vars.len();
    for t in [&lhs, &rhs] {
        if let Some(m) = t.max_var() {
            if m >= n {
                return Err(Error::UnboundVariable(m));
            }
        }
    }
    let k = alg.size();
    let total = k
        .checked_pow(n as u32)
        .ok_or_else(|| Error::BudgetExceeded(format!("{k}^{n} bindings")))?;
    let fails = |i: usize| {
        let mut b = vec![0usize; n];
        decode_binding(i, k, n, &mut b);
        lhs.eval(alg, &b) != rhs.eval(alg, &b)
    };
    let first = if total < 4096 {
        (0..total).find(|&i| fails(i))
    } else {
        (0..total).into_par_iter().with_min_len(1024).find_first(|&i| fails(i))
    };
    let equation = eq.to_string();
    Ok(match first {
        None => Verdict { equation, holds: true, counterexample: None, lhs: None, rhs: None },
        Some(i) => {
            let mut b = vec![0usize; n];
            decode_binding(i, k, n, &mut b);
            let binding = eq
                .vars
                .iter()
                .zip(&b)
                .map(|(v, &e)| (v.clone(), alg.element(e).to_string()))
                .collect();
            Verdict {
                equation,
                holds: false,
                counterexample: Some(Binding(binding)),
                lhs: Some(alg.element(lhs.eval(alg, &b)).to_string()),
                rhs: Some(alg.element(rhs.eval(alg, &b)).to_string()),
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SatisfactionReport {
    pub algebra: String,
    pub equations: String,
    pub verdicts: Vec<Verdict>,
    /// All equations hold.
    pub member: bool,
}

impl SatisfactionReport {
    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.holds)
    }
}

/// Symbols the equations use that `alg` lacks (by name and arity).
pub fn missing_symbols(alg: &FiniteAlgebra, eqs: &EquationSet) -> Vec<String> {
    eqs.symbols()
        .into_iter()
        .filter(|(name, arity)| alg.signature().get(name).map(|s| s.arity) != Some(*arity))
        .map(|(name, arity)| format!("{name}/{arity}"))
        .collect()
}

/// Per-equation verdicts; fails up front with every missing symbol listed.
pub fn satisfies_all(alg: &FiniteAlgebra, eqs: &EquationSet) -> Result<SatisfactionReport> {
    let missing = missing_symbols(alg, eqs);
    if !missing.is_empty() {
        return Err(Error::MissingSymbols(missing));
    }
    let verdicts = eqs.equations.iter().map(|e| satisfies(alg, e)).collect::<Result<Vec<_>>>()?;
    let member = verdicts.iter().all(|v| v.holds);
    Ok(SatisfactionReport {
        algebra: alg.name().to_string(),
        equations: eqs.name.clone(),
        verdicts,
        member,
    })
}
