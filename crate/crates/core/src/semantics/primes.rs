//! Prime implicates by Tison's method: for each variable in turn, add every
//! non-tautological resolvent on that variable and keep the set free of
//! subsumed clauses.

use crate::cnf::{Clause, CnfFormula, Var};
use crate::error::{Error, Result};

pub const DEFAULT_PRIME_LIMIT: usize = 200_000;

pub fn prime_implicates(formula: &CnfFormula) -> Result<CnfFormula> {
    prime_implicates_with_limit(formula, DEFAULT_PRIME_LIMIT)
}

/// Output is sorted by length, then literal order. An unsatisfiable input
/// yields exactly the empty clause.
pub fn prime_implicates_with_limit(formula: &CnfFormula, limit: usize) -> Result<CnfFormula> {
    let mut set = ClauseSet::default();
    for clause in formula.iter().filter(|c| !c.is_tautology()) {
        set.insert(clause.clone());
    }
    for v in formula.vars() {
        if set.has_empty() {
            break;
        }
        resolve_on(&mut set, v, limit)?;
    }
    let mut clauses = set.into_clauses();
    clauses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lits().cmp(b.lits())));
    CnfFormula::from_clauses(formula.num_vars(), clauses)
}

fn resolve_on(set: &mut ClauseSet, v: Var, limit: usize) -> Result<()> {
    let (pos, neg): (Vec<Clause>, Vec<Clause>) = {
        let live = set.live();
        (
            live.clone().filter(|c| c.contains(v.positive())).cloned().collect(),
            live.filter(|c| c.contains(v.negative())).cloned().collect(),
        )
    };
    for p in &pos {
        for n in &neg {
            let resolvent = Clause::new(
                p.iter()
                    .filter(|&l| l != v.positive())
                    .chain(n.iter().filter(|&l| l != v.negative())),
            );
            if resolvent.is_tautology() {
                continue;
            }
            set.insert(resolvent);
            if set.len() > limit {
                return Err(Error::ClauseLimitExceeded { limit });
            }
            if set.has_empty() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// A subsumption-free clause set with tombstones.
#[derive(Default)]
struct ClauseSet {
    slots: Vec<Option<Clause>>,
    count: usize,
}

impl ClauseSet {
    fn live(&self) -> impl Iterator<Item = &Clause> + Clone {
        self.slots.iter().flatten()
    }

    fn len(&self) -> usize {
        self.count
    }

    fn has_empty(&self) -> bool {
        self.live().any(Clause::is_empty)
    }

    fn insert(&mut self, clause: Clause) {
        if self.live().any(|c| c.subsumes(&clause)) {
            return;
        }
        for slot in &mut self.slots {
            if slot.as_ref().is_some_and(|c| clause.subsumes(c)) {
                *slot = None;
                self.count -= 1;
            }
        }
        if self.slots.len() > 64 && self.slots.len() > 2 * self.count {
            self.slots.retain(Option::is_some);
        }
        self.slots.push(Some(clause));
        self.count += 1;
    }

    fn into_clauses(self) -> Vec<Clause> {
        self.slots.into_iter().flatten().collect()
    }
}
