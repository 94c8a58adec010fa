//! Unit resolution to a fixpoint.
//!
//! [`UnitPropagator`] precomputes occurrence lists once and can then be
//! queried for many assumption sets, which is how the deciders use it.

use std::collections::VecDeque;

use crate::cnf::{CnfFormula, Lit, PartialAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Stable,
    Conflict,
}

/// The closure `cl_up(φ, α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationResult {
    pub status: Status,
    /// Sorted; all literals of the universe on conflict.
    pub derived: Vec<Lit>,
    /// Clause that became empty; diagnostic only. `None` when the conflict
    /// came from complementary assumptions.
    pub conflict_clause: Option<usize>,
}

impl PropagationResult {
    pub fn is_conflict(&self) -> bool {
        self.status == Status::Conflict
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.derived.binary_search(&lit).is_ok()
    }

    /// The derived literals as an assignment, unless propagation failed.
    pub fn assignment(&self) -> Option<PartialAssignment> {
        match self.status {
            Status::Stable => Some(PartialAssignment::from_sorted_unchecked(self.derived.clone())),
            Status::Conflict => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Stable,
    /// Index of the falsified clause, or `None` for clashing assumptions.
    Conflict(Option<usize>),
}

pub struct UnitPropagator<'a> {
    formula: &'a CnfFormula,
    occurs: Vec<Vec<u32>>,
    units: Vec<usize>,
    empty: Option<usize>,
    values: Vec<Option<bool>>,
    trail: Vec<Lit>,
    queue: VecDeque<Lit>,
}

impl<'a> UnitPropagator<'a> {
    pub fn new(formula: &'a CnfFormula) -> Self {
        let mut occurs = vec![Vec::new(); 2 * formula.num_vars()];
        let mut units = Vec::new();
        let mut empty = None;
        for (i, clause) in formula.iter().enumerate() {
            match clause.len() {
                0 => {
                    empty.get_or_insert(i);
                }
                1 => units.push(i),
                _ => {}
            }
            for lit in clause.iter() {
                occurs[lit.code()].push(i as u32);
            }
        }
        UnitPropagator {
            formula,
            occurs,
            units,
            empty,
            values: vec![None; formula.num_vars()],
            trail: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    pub fn formula(&self) -> &'a CnfFormula {
        self.formula
    }

    fn reset(&mut self) {
        for lit in self.trail.drain(..) {
            self.values[lit.var().index()] = None;
        }
        self.queue.clear();
    }

    fn value(&self, lit: Lit) -> Option<bool> {
        self.values[lit.var().index()].map(|v| v == lit.is_positive())
    }

    /// Returns false if `lit` is already false.
    fn enqueue(&mut self, lit: Lit) -> bool {
        match self.value(lit) {
            Some(true) => true,
            Some(false) => false,
            None => {
                self.values[lit.var().index()] = Some(lit.is_positive());
                self.trail.push(lit);
                self.queue.push_back(lit);
                true
            }
        }
    }

    /// Runs unit propagation from `assumptions`. The literals assigned so far
    /// are available through [`UnitPropagator::trail`] until the next call.
    pub fn propagate(&mut self, assumptions: impl IntoIterator<Item = Lit>) -> Outcome {
        self.reset();
        if let Some(i) = self.empty {
            return Outcome::Conflict(Some(i));
        }
        for lit in assumptions {
            if !self.enqueue(lit) {
                return Outcome::Conflict(None);
            }
        }
        for k in 0..self.units.len() {
            let i = self.units[k];
            let lit = self.formula.clauses()[i].lits()[0];
            if !self.enqueue(lit) {
                return Outcome::Conflict(Some(i));
            }
        }
        while let Some(lit) = self.queue.pop_front() {
            let falsified = (!lit).code();
            for k in 0..self.occurs[falsified].len() {
                let ci = self.occurs[falsified][k] as usize;
                let clause = &self.formula.clauses()[ci];
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for l in clause.iter() {
                    match self.value(l) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open_count += 1;
                            open = Some(l);
                            if open_count > 1 {
                                break;
                            }
                        }
                    }
                }
                if satisfied || open_count > 1 {
                    continue;
                }
                match open {
                    None => return Outcome::Conflict(Some(ci)),
                    Some(unit) => {
                        self.enqueue(unit);
                    }
                }
            }
        }
        Outcome::Stable
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    /// Value of a literal after the last [`UnitPropagator::propagate`] call.
    pub fn is_true(&self, lit: Lit) -> bool {
        self.value(lit) == Some(true)
    }

    pub fn closure(&mut self, alpha: &PartialAssignment) -> PropagationResult {
        match self.propagate(alpha.iter()) {
            Outcome::Stable => {
                let mut lits = self.trail.clone();
                lits.sort_unstable();
                PropagationResult {
                    status: Status::Stable,
                    derived: lits,
                    conflict_clause: None,
                }
            }
            Outcome::Conflict(clause) => PropagationResult {
                status: Status::Conflict,
                derived: all_literals(self.formula.num_vars()),
                conflict_clause: clause,
            },
        }
    }
}

/// `cl_up(φ, α)`: the literals derived from `φ ∧ α` by unit resolution, or
/// every literal when the empty clause is derived.
pub fn up_closure(formula: &CnfFormula, alpha: &PartialAssignment) -> PropagationResult {
    UnitPropagator::new(formula).closure(alpha)
}

pub fn all_literals(num_vars: usize) -> Vec<Lit> {
    (0..2 * num_vars).map(Lit::from_code).collect()
}
