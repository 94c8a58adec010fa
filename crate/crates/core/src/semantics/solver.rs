//! A small complete search: DPLL with two watched literals and
//! chronological backtracking.
//!
//! Clauses can be added between calls to [`Solver::solve`], and each call
//! takes a list of assumption literals, so one instance serves many
//! satisfiability queries over the same base formula.

use std::mem;

use crate::cnf::{CnfFormula, Lit};

#[derive(Clone, Copy)]
struct Level {
    trail_len: usize,
    decision: Lit,
    flipped: bool,
}

#[derive(Clone)]
pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    units: Vec<Lit>,
    inconsistent: bool,
    values: Vec<Option<bool>>,
    trail: Vec<Lit>,
    levels: Vec<Level>,
    qhead: usize,
    phase: Vec<bool>,
}

impl Solver {
    pub fn new(num_vars: usize) -> Solver {
        Solver {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            units: Vec::new(),
            inconsistent: false,
            values: vec![None; num_vars],
            trail: Vec::new(),
            levels: Vec::new(),
            qhead: 0,
            phase: vec![false; num_vars],
        }
    }

    pub fn from_formula(formula: &CnfFormula) -> Solver {
        let mut solver = Solver::new(formula.num_vars());
        for clause in formula.iter() {
            solver.add_clause(clause.lits());
        }
        solver
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Polarity tried first when branching on `var_index`.
    pub fn set_phase(&mut self, var_index: usize, value: bool) {
        self.phase[var_index] = value;
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        self.backtrack_to(0);
        self.levels.clear();
        let mut lits = lits.to_vec();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        match lits.len() {
            0 => self.inconsistent = true,
            1 => self.units.push(lits[0]),
            _ => {
                let index = self.clauses.len();
                self.watches[lits[0].code()].push(index);
                self.watches[lits[1].code()].push(index);
                self.clauses.push(lits);
            }
        }
    }

    fn value(&self, lit: Lit) -> Option<bool> {
        self.values[lit.var().index()].map(|v| v == lit.is_positive())
    }

    fn enqueue(&mut self, lit: Lit) -> bool {
        match self.value(lit) {
            Some(v) => v,
            None => {
                self.values[lit.var().index()] = Some(lit.is_positive());
                self.trail.push(lit);
                true
            }
        }
    }

    fn backtrack_to(&mut self, trail_len: usize) {
        while self.trail.len() > trail_len {
            let lit = self.trail.pop().unwrap();
            self.values[lit.var().index()] = None;
        }
        self.qhead = self.qhead.min(trail_len);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = !self.trail[self.qhead];
            self.qhead += 1;
            let mut watchers = mem::take(&mut self.watches[falsified.code()]);
            let mut keep = 0;
            let mut i = 0;
            let mut ok = true;
            while i < watchers.len() {
                let ci = watchers[i];
                i += 1;
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.values[first.var().index()] == Some(first.is_positive()) {
                    watchers[keep] = ci;
                    keep += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    if self.values[l.var().index()] != Some(!l.is_positive()) {
                        clause.swap(1, k);
                        self.watches[clause[1].code()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                watchers[keep] = ci;
                keep += 1;
                if !self.enqueue(first) {
                    ok = false;
                    break;
                }
            }
            while i < watchers.len() {
                watchers[keep] = watchers[i];
                keep += 1;
                i += 1;
            }
            watchers.truncate(keep);
            self.watches[falsified.code()] = watchers;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Searches for a model of the clauses extended by `assumptions`.
    /// Returns the model as one boolean per variable.
    pub fn solve(&mut self, assumptions: &[Lit]) -> Option<Vec<bool>> {
        self.backtrack_to(0);
        self.levels.clear();
        self.qhead = 0;
        if self.inconsistent {
            return None;
        }
        for k in 0..self.units.len() {
            if !self.enqueue(self.units[k]) {
                return None;
            }
        }
        for &lit in assumptions {
            if !self.enqueue(lit) {
                return None;
            }
        }
        if !self.propagate() {
            return None;
        }
        let mut next = 0;
        loop {
            while next < self.num_vars && self.values[next].is_some() {
                next += 1;
            }
            if next == self.num_vars {
                let model = self.values.iter().map(|v| v.unwrap()).collect();
                return Some(model);
            }
            let decision = Lit::new(crate::cnf::Var::from_index(next), self.phase[next]);
            self.levels.push(Level {
                trail_len: self.trail.len(),
                decision,
                flipped: false,
            });
            self.enqueue(decision);
            while !self.propagate() {
                loop {
                    let level = self.levels.pop()?;
                    self.backtrack_to(level.trail_len);
                    if !level.flipped {
                        self.levels.push(Level {
                            trail_len: level.trail_len,
                            decision: !level.decision,
                            flipped: true,
                        });
                        self.enqueue(!level.decision);
                        break;
                    }
                }
                next = 0;
            }
        }
    }

    pub fn is_satisfiable(&mut self, assumptions: &[Lit]) -> bool {
        self.solve(assumptions).is_some()
    }
}
