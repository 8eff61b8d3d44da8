//! n-ary term operations, computed as the closure of the projections under
//! the basic operations.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{table_len, FiniteAlgebra, TupleIter};
use crate::error::{Error, Result};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloneMember {
    /// Values on all n-tuples in lexicographic order.
    pub table: Vec<usize>,
    pub witness: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloneFragment {
    pub arity: usize,
    pub vars: Vec<String>,
    /// Discovery order: projections first, then by closure round.
    pub members: Vec<CloneMember>,
    /// False when the member budget stopped the closure early.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CloneMemberView {
    pub witness: String,
    pub table: Vec<String>,
}

impl CloneFragment {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_table(&self, table: &[usize]) -> bool {
        self.members.iter().any(|m| m.table == table)
    }

    pub fn views(&self, alg: &FiniteAlgebra) -> Vec<CloneMemberView> {
        self.members
            .iter()
            .map(|m| CloneMemberView {
                witness: m.witness.display(&self.vars).to_string(),
                table: m.table.iter().map(|&v| alg.element(v).to_string()).collect(),
            })
            .collect()
    }
}

pub const DEFAULT_CLONE_BUDGET: usize = 100_000;

/// `Clo_n` of `alg`. Stops with `complete = false` once `budget` members exist.
pub fn clone_n(alg: &FiniteAlgebra, n: usize, budget: usize) -> Result<CloneFragment> {
    if n == 0 {
        return Err(Error::InvalidArgument("clone arity must be at least 1".into()));
    }
    let k = alg.size();
    let cells = k
        .checked_pow(n as u32)
        .filter(|&c| c <= 1 << 20)
        .ok_or_else(|| Error::BudgetExceeded(format!("{k}^{n} table cells")))?;
    let tuples: Vec<Vec<usize>> = TupleIter::new(k, n).collect();
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut members: Vec<CloneMember> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut complete = true;

    let push = |table: Vec<usize>,
                witness: Term,
                members: &mut Vec<CloneMember>,
                index: &mut HashMap<Vec<usize>, usize>|
     -> bool {
        if index.contains_key(&table) {
            return true;
        }
        if members.len() >= budget {
            return false;
        }
        index.insert(table.clone(), members.len());
        members.push(CloneMember { table, witness });
        true
    };

    for i in 0..n {
        let table = tuples.iter().map(|t| t[i]).collect();
        if !push(table, Term::Var(i), &mut members, &mut index) {
            complete = false;
        }
    }

    let mut done = 0;
    let mut first_round = true;
    'rounds: while complete && (done < members.len() || first_round) {
        let before = members.len();
        for (si, sym) in alg.signature().symbols().iter().enumerate() {
            if sym.arity == 0 {
                if !first_round {
                    continue;
                }
                let v = alg.apply(si, &[]);
                if !push(vec![v; cells], Term::constant(&sym.name), &mut members, &mut index) {
                    complete = false;
                    break 'rounds;
                }
                continue;
            }
            // semi-naive: at least one argument must be new since the last round
            let combos = table_len(before, sym.arity);
            let mut args = vec![0usize; sym.arity];
            for c in 0..combos {
                let mut rest = c;
                for slot in args.iter_mut().rev() {
                    *slot = rest % before;
                    rest /= before;
                }
                if !first_round && args.iter().all(|&a| a < done) {
                    continue;
                }
                let mut row = vec![0usize; sym.arity];
                let table: Vec<usize> = (0..cells)
                    .map(|t| {
                        for (r, &a) in row.iter_mut().zip(&args) {
                            *r = members[a].table[t];
                        }
                        alg.apply(si, &row)
                    })
                    .collect();
                if index.contains_key(&table) {
                    continue;
                }
                let witness =
                    Term::App(sym.name.clone(), args.iter().map(|&a| members[a].witness.clone()).collect());
                if !push(table, witness, &mut members, &mut index) {
                    complete = false;
                    break 'rounds;
                }
            }
        }
        first_round = false;
        done = before;
    }
    Ok(CloneFragment { arity: n, vars, members, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::logic::eval_term;

    #[test]
    fn lattice_clones() {
        let l = lattice2();
        assert_eq!(clone_n(&l, 1, 1000).unwrap().len(), 1);
        let c2 = clone_n(&l, 2, 1000).unwrap();
        assert_eq!(c2.len(), 4);
        assert!(c2.contains_table(&[0, 0, 0, 1]));
        assert!(c2.contains_table(&[0, 1, 1, 1]));
    }

    #[test]
    fn boolean_unary_clone() {
        let c = clone_n(&boolean2(), 1, 1000).unwrap();
        assert_eq!(c.len(), 4);
        for t in [[0, 1], [1, 0], [0, 0], [1, 1]] {
            assert!(c.contains_table(&t));
        }
    }

    #[test]
    fn witnesses_agree_with_evaluation() {
        for a in [boolean2(), boolean4(), lattice2(), z2()] {
            for n in 1..=2 {
                let c = clone_n(&a, n, 10_000).unwrap();
                assert!(c.complete);
                for m in &c.members {
                    for (t, tuple) in TupleIter::new(a.size(), n).enumerate() {
                        assert_eq!(eval_term(&a, &m.witness, &tuple).unwrap(), m.table[t]);
                    }
                }
            }
        }
    }

    #[test]
    fn budget_reports_partial() {
        let c = clone_n(&boolean2(), 2, 5).unwrap();
        assert!(!c.complete);
        assert_eq!(c.len(), 5);
        assert!(clone_n(&boolean2(), 0, 5).is_err());
    }
}
