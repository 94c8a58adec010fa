//! The implicational dual-rail encoding.
//!
//! Every literal `l` of the source universe gets a meta-variable `⟦l⟧`:
//! `⟦x_i⟧ = i` and `⟦¬x_i⟧ = n + i`. A model of `DR(φ)` is the
//! characteristic vector of a partial assignment that is closed under unit
//! propagation in `φ` and consistent.

use crate::cnf::{Clause, CnfFormula, Lit, PartialAssignment, Var};
use crate::error::{Error, Result};
use crate::propagation::{Outcome, UnitPropagator};
use crate::semantics::{is_satisfiable, prime_implicates, SemanticOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetaVarMap {
    num_vars: usize,
}

impl MetaVarMap {
    pub fn new(num_vars: usize) -> MetaVarMap {
        MetaVarMap { num_vars }
    }

    pub fn num_source_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_meta_vars(&self) -> usize {
        2 * self.num_vars
    }

    pub fn meta(&self, lit: Lit) -> Var {
        let i = lit.var().index();
        if lit.is_positive() {
            Var::from_index(i)
        } else {
            Var::from_index(self.num_vars + i)
        }
    }

    pub fn literal(&self, meta: Var) -> Lit {
        let i = meta.index();
        assert!(i < 2 * self.num_vars, "meta-variable {meta} out of range");
        if i < self.num_vars {
            Var::from_index(i).positive()
        } else {
            Var::from_index(i - self.num_vars).negative()
        }
    }

    /// Characteristic vector of `alpha`, indexed by meta-variable.
    pub fn encode(&self, alpha: &PartialAssignment) -> Vec<bool> {
        let mut bits = vec![false; 2 * self.num_vars];
        for lit in alpha.iter() {
            bits[self.meta(lit).index()] = true;
        }
        bits
    }

    pub fn decode(&self, bits: &[bool]) -> Result<PartialAssignment> {
        PartialAssignment::new(
            bits.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| self.literal(Var::from_index(i))),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualRailFormula {
    pub horn: CnfFormula,
    pub map: MetaVarMap,
}

impl DualRailFormula {
    pub fn source_vars(&self) -> impl Iterator<Item = Var> {
        (0..self.map.num_source_vars()).map(Var::from_index)
    }
}

/// `DR(φ)`: for every `l ∈ C ∈ φ` the clause `⟦l⟧ ∨ ⋁_{e ∈ C∖{l}} ¬⟦¬e⟧`,
/// then one clause `¬⟦x⟧ ∨ ¬⟦¬x⟧` per variable.
pub fn dual_rail(formula: &CnfFormula) -> Result<DualRailFormula> {
    if formula.has_empty_clause() {
        return Err(Error::EmptyClause);
    }
    formula.reject_tautologies()?;
    let map = MetaVarMap::new(formula.num_vars());
    let mut horn = CnfFormula::new(map.num_meta_vars());
    for clause in formula.iter() {
        for l in clause.iter() {
            let lits = std::iter::once(map.meta(l).positive()).chain(
                clause
                    .iter()
                    .filter(|&e| e != l)
                    .map(|e| map.meta(!e).negative()),
            );
            horn.push(Clause::new(lits))?;
        }
    }
    for v in formula.vars() {
        horn.push(Clause::new([
            map.meta(v.positive()).negative(),
            map.meta(v.negative()).negative(),
        ]))?;
    }
    Ok(DualRailFormula { horn, map })
}

/// Entailment for Horn formulas, decided by unit propagation alone.
pub fn horn_entails(horn: &CnfFormula, clause: &Clause) -> Result<bool> {
    horn.check_horn()?;
    Ok(entails_by_up(&mut UnitPropagator::new(horn), clause))
}

fn entails_by_up(up: &mut UnitPropagator<'_>, clause: &Clause) -> bool {
    match up.propagate(clause.iter().map(|l| !l)) {
        Outcome::Conflict(_) => true,
        Outcome::Stable => clause.iter().any(|l| up.is_true(l)),
    }
}

pub fn horn_equivalent(left: &CnfFormula, right: &CnfFormula) -> Result<bool> {
    left.check_horn()?;
    right.check_horn()?;
    if left.num_vars() != right.num_vars() {
        return Err(Error::UniverseMismatch(format!(
            "{} vs {} meta-variables",
            left.num_vars(),
            right.num_vars()
        )));
    }
    let mut l = UnitPropagator::new(left);
    let mut r = UnitPropagator::new(right);
    Ok(right.iter().all(|c| entails_by_up(&mut l, c)) && left.iter().all(|c| entails_by_up(&mut r, c)))
}

/// PC test through the Horn side: `φ` is PC exactly when `DR(φ)` is
/// equivalent to `DR` of its prime implicates.
pub fn pc_via_dual_rail(formula: &CnfFormula) -> Result<bool> {
    if formula.has_empty_clause() {
        return Err(Error::EmptyClause);
    }
    formula.reject_tautologies()?;
    if !is_satisfiable(formula) {
        return Err(Error::Unsatisfiable);
    }
    let primes = prime_implicates(formula)?;
    horn_equivalent(&dual_rail(formula)?.horn, &dual_rail(&primes)?.horn)
}

pub const DEFAULT_CLOSED_LIMIT: usize = 12;

/// The set `S(f)` of assignments with `cl_sem(f, α) = α`, shortest first.
pub fn closed_assignments(formula: &CnfFormula) -> Result<Vec<PartialAssignment>> {
    closed_assignments_with_limit(formula, DEFAULT_CLOSED_LIMIT)
}

pub fn closed_assignments_with_limit(formula: &CnfFormula, limit: usize) -> Result<Vec<PartialAssignment>> {
    let n = formula.num_vars();
    if n > limit {
        return Err(Error::LimitExceeded { vars: n, limit });
    }
    let mut oracle = SemanticOracle::new(formula);
    Ok(PartialAssignment::all(n)
        .filter(|alpha| oracle.closure(alpha) == alpha.lits())
        .collect())
}
