//! Exact deciders for unit refutation completeness and propagation
//! completeness, the absorption test, and irredundant reductions.
//!
//! Three search strategies are available. [`Strategy::Exhaustive`] visits
//! all `3^n` partial assignments shortest first and reports the
//! lexicographically least failing one. [`Strategy::Primes`] only tries the
//! assignments `¬(C ∖ {l})` for prime implicates `C`, which always include
//! that least failing assignment, so both report the same witness.
//! [`Strategy::ClosedSets`] only looks at assignments closed under unit
//! propagation, drawing them as models of the dual-rail encoding and ruling
//! out whole families at once with each model of `φ` it meets; its
//! witnesses are inclusion-minimal.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cnf::{Clause, CnfFormula, Lit, PartialAssignment, Var};
use crate::dual_rail::{dual_rail, MetaVarMap};
use crate::error::{Error, Result};
use crate::propagation::{Outcome, UnitPropagator};
use crate::semantics::{entails, equivalent, prime_implicates, prime_implicates_with_limit, SemanticOracle, Solver};

pub const DEFAULT_LIMIT: usize = 14;

/// Below this many variables [`Strategy::Auto`] enumerates exhaustively.
pub const EXHAUSTIVE_BELOW: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Exhaustive,
    Primes,
    ClosedSets,
}

/// Prime implicate budget of [`Strategy::Auto`] before it falls back to
/// [`Strategy::ClosedSets`].
pub const AUTO_PRIME_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeciderConfig {
    /// Largest universe the deciders accept.
    pub limit: usize,
    pub strategy: Strategy,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        DeciderConfig {
            limit: DEFAULT_LIMIT,
            strategy: Strategy::Auto,
        }
    }
}

impl DeciderConfig {
    pub fn with_limit(limit: usize) -> Self {
        DeciderConfig {
            limit,
            ..Self::default()
        }
    }

    fn resolve(&self, formula: &CnfFormula) -> Result<Strategy> {
        let n = formula.num_vars();
        if n > self.limit {
            return Err(Error::LimitExceeded {
                vars: n,
                limit: self.limit,
            });
        }
        formula.reject_tautologies()?;
        Ok(match self.strategy {
            Strategy::Auto if n < EXHAUSTIVE_BELOW => Strategy::Exhaustive,
            s => s,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionReport {
    pub verdict: bool,
    pub witness: Option<PartialAssignment>,
    /// For a failed PC check, an implied literal that propagation misses.
    pub literal: Option<Lit>,
}

impl DecisionReport {
    fn holds() -> Self {
        DecisionReport {
            verdict: true,
            witness: None,
            literal: None,
        }
    }

    fn fails(witness: PartialAssignment, literal: Option<Lit>) -> Self {
        DecisionReport {
            verdict: false,
            witness: Some(witness),
            literal,
        }
    }
}

pub fn is_urc(formula: &CnfFormula) -> Result<DecisionReport> {
    is_urc_with(formula, &DeciderConfig::default())
}

pub fn is_pc(formula: &CnfFormula) -> Result<DecisionReport> {
    is_pc_with(formula, &DeciderConfig::default())
}

pub fn is_urc_with(formula: &CnfFormula, config: &DeciderConfig) -> Result<DecisionReport> {
    let strategy = config.resolve(formula)?;
    if formula.has_empty_clause() {
        return Ok(DecisionReport::holds());
    }
    Ok(match strategy {
        Strategy::Exhaustive => exhaustive(formula, false),
        Strategy::Primes => by_primes(formula, &prime_implicates(formula)?, false),
        Strategy::ClosedSets => closed_sets_urc(formula),
        Strategy::Auto => match prime_implicates_with_limit(formula, AUTO_PRIME_LIMIT) {
            Ok(primes) => by_primes(formula, &primes, false),
            Err(Error::ClauseLimitExceeded { .. }) => closed_sets_urc(formula),
            Err(e) => return Err(e),
        },
    })
}

pub fn is_pc_with(formula: &CnfFormula, config: &DeciderConfig) -> Result<DecisionReport> {
    let strategy = config.resolve(formula)?;
    if formula.has_empty_clause() {
        return Ok(DecisionReport::holds());
    }
    Ok(match strategy {
        Strategy::Exhaustive => exhaustive(formula, true),
        Strategy::Primes => by_primes(formula, &prime_implicates(formula)?, true),
        Strategy::ClosedSets => closed_sets_pc(formula),
        Strategy::Auto => match prime_implicates_with_limit(formula, AUTO_PRIME_LIMIT) {
            Ok(primes) => by_primes(formula, &primes, true),
            Err(Error::ClauseLimitExceeded { .. }) => closed_sets_pc(formula),
            Err(e) => return Err(e),
        },
    })
}

/// `φ ∧ α ⊨ ⊥` while `φ ∧ α ⊬₁ ⊥`.
pub fn is_urc_witness(formula: &CnfFormula, alpha: &PartialAssignment) -> bool {
    let stable = UnitPropagator::new(formula).propagate(alpha.iter()) == Outcome::Stable;
    stable && !SemanticOracle::new(formula).is_satisfiable(alpha.lits())
}

/// `φ ∧ α ⊨ l` while unit propagation derives neither `l` nor `⊥`.
pub fn is_pc_witness(formula: &CnfFormula, alpha: &PartialAssignment, lit: Lit) -> bool {
    let mut up = UnitPropagator::new(formula);
    if up.propagate(alpha.iter()) != Outcome::Stable || up.is_true(lit) {
        return false;
    }
    let mut assumptions = alpha.lits().to_vec();
    assumptions.push(!lit);
    !SemanticOracle::new(formula).is_satisfiable(&assumptions)
}

fn exhaustive(formula: &CnfFormula, pc: bool) -> DecisionReport {
    let n = formula.num_vars();
    for size in 0..=n {
        let batch = PartialAssignment::all_of_size(n, size);
        let failure = batch
            .par_iter()
            .map_init(
                || (UnitPropagator::new(formula), SemanticOracle::new(formula)),
                |(up, oracle), alpha| check_one(up, oracle, alpha, pc),
            )
            .find_first(Option::is_some)
            .flatten();
        if let Some(report) = failure {
            return report;
        }
    }
    DecisionReport::holds()
}

fn by_primes(formula: &CnfFormula, primes: &CnfFormula, pc: bool) -> DecisionReport {
    // each candidate must stay stable and, when a literal is attached, miss it
    let candidates: Vec<(PartialAssignment, Option<Lit>)> = primes
        .iter()
        .flat_map(|c| {
            let negated = PartialAssignment::new(c.iter().map(|l| !l)).expect("primes are not tautologies");
            if pc && !c.is_empty() {
                c.iter().map(|l| (negated.without(!l), Some(l))).collect()
            } else {
                vec![(negated, None)]
            }
        })
        .collect();
    let failure = candidates
        .par_iter()
        .map_init(
            || UnitPropagator::new(formula),
            |up, (alpha, lit)| {
                let stable = up.propagate(alpha.iter()) == Outcome::Stable;
                (stable && lit.is_none_or(|l| !up.is_true(l))).then_some(alpha)
            },
        )
        .flatten()
        .min_by(|a, b| (a.len(), a.lits()).cmp(&(b.len(), b.lits())));
    match failure {
        None => DecisionReport::holds(),
        Some(alpha) => check_one(
            &mut UnitPropagator::new(formula),
            &mut SemanticOracle::new(formula),
            alpha,
            pc,
        )
        .expect("a stable candidate fails"),
    }
}

fn check_one(
    up: &mut UnitPropagator<'_>,
    oracle: &mut SemanticOracle,
    alpha: &PartialAssignment,
    pc: bool,
) -> Option<DecisionReport> {
    if up.propagate(alpha.iter()) != Outcome::Stable {
        return None;
    }
    if !pc {
        return (!oracle.is_satisfiable(alpha.lits())).then(|| DecisionReport::fails(alpha.clone(), None));
    }
    let derived: Vec<bool> = (0..up.formula().num_vars() * 2)
        .map(|code| up.is_true(Lit::from_code(code)))
        .collect();
    let semantic = oracle.closure(alpha);
    semantic
        .into_iter()
        .find(|l| !derived[l.code()])
        .map(|l| DecisionReport::fails(alpha.clone(), Some(l)))
}

fn assignment_from_meta(map: &MetaVarMap, model: &[bool]) -> PartialAssignment {
    map.decode(&model[..map.num_meta_vars()])
        .expect("dual-rail models are consistent")
}

/// `⋁_{e false in m} ⟦e⟧`: rules out every assignment contained in `m`.
fn outside_model(map: &MetaVarMap, model: &[bool]) -> Vec<Lit> {
    (0..map.num_source_vars())
        .map(|i| {
            let var = Var::from_index(i);
            map.meta(Lit::new(var, !model[i])).positive()
        })
        .collect()
}

fn dual_rail_solver(formula: &CnfFormula, extra_vars: usize) -> (MetaVarMap, Solver) {
    let dr = dual_rail(formula).expect("checked: no empty or tautological clause");
    let mut solver = Solver::new(dr.map.num_meta_vars() + extra_vars);
    for clause in dr.horn.iter() {
        solver.add_clause(clause.lits());
    }
    (dr.map, solver)
}

/// Drops literals from `alpha` front to back while `keep` still holds.
fn shrink(alpha: &PartialAssignment, mut keep: impl FnMut(&[Lit]) -> bool) -> PartialAssignment {
    let mut lits = alpha.lits().to_vec();
    let mut i = 0;
    while i < lits.len() {
        let removed = lits.remove(i);
        if !keep(&lits) {
            lits.insert(i, removed);
            i += 1;
        }
    }
    PartialAssignment::new(lits).expect("subset of a consistent assignment")
}

fn closed_sets_urc(formula: &CnfFormula) -> DecisionReport {
    let (map, mut candidates) = dual_rail_solver(formula, 0);
    let mut oracle = SemanticOracle::new(formula);
    while let Some(meta) = candidates.solve(&[]) {
        let alpha = assignment_from_meta(&map, &meta);
        match oracle.model(alpha.lits()) {
            Some(model) => candidates.add_clause(&outside_model(&map, &model)),
            None => {
                let witness = shrink(&alpha, |lits| !oracle.is_satisfiable(lits));
                return DecisionReport::fails(witness, None);
            }
        }
    }
    DecisionReport::holds()
}

fn closed_sets_pc(formula: &CnfFormula) -> DecisionReport {
    let urc = closed_sets_urc(formula);
    if let Some(alpha) = urc.witness {
        let mut up = UnitPropagator::new(formula);
        up.propagate(alpha.iter());
        let lit = (0..2 * formula.num_vars())
            .map(Lit::from_code)
            .find(|&l| !up.is_true(l))
            .expect("a stable assignment leaves some literal underived");
        return DecisionReport::fails(alpha, Some(lit));
    }
    // selector t_l picks the literal l whose implication is tested; it
    // requires l and ¬l to be absent from the candidate assignment
    let n = formula.num_vars();
    let (map, mut candidates) = dual_rail_solver(formula, 2 * n);
    let selector = |l: Lit| Var::from_index(2 * n + l.code()).positive();
    let all: Vec<Lit> = (0..2 * n).map(Lit::from_code).collect();
    for &l in &all {
        candidates.add_clause(&[!selector(l), map.meta(l).negative()]);
        candidates.add_clause(&[!selector(l), map.meta(!l).negative()]);
    }
    candidates.add_clause(&all.iter().map(|&l| selector(l)).collect::<Vec<_>>());
    for (i, &l) in all.iter().enumerate() {
        for &k in &all[i + 1..] {
            candidates.add_clause(&[!selector(l), !selector(k)]);
        }
    }
    let mut oracle = SemanticOracle::new(formula);
    let mut up = UnitPropagator::new(formula);
    while let Some(meta) = candidates.solve(&[]) {
        let alpha = assignment_from_meta(&map, &meta);
        let lit = *all
            .iter()
            .find(|&&l| meta[selector(l).var().index()])
            .expect("exactly one selector is set");
        let mut assumptions = alpha.lits().to_vec();
        assumptions.push(!lit);
        match oracle.model(&assumptions) {
            Some(model) => {
                let mut block = outside_model(&map, &model);
                block.extend(
                    all.iter()
                        .filter(|l| model[l.var().index()] == l.is_positive())
                        .map(|&l| selector(l)),
                );
                candidates.add_clause(&block);
            }
            None => {
                let witness = shrink(&alpha, |lits| {
                    let mut a = lits.to_vec();
                    a.push(!lit);
                    up.propagate(lits.iter().copied());
                    !up.is_true(lit) && !oracle.is_satisfiable(&a)
                });
                return DecisionReport::fails(witness, Some(lit));
            }
        }
    }
    DecisionReport::holds()
}

/// Whether every literal of `clause` is recovered by unit propagation from
/// the negation of the others.
fn absorbed_by_up(up: &mut UnitPropagator<'_>, clause: &Clause) -> bool {
    clause.iter().all(|l| {
        match up.propagate(clause.iter().filter(|&e| e != l).map(|e| !e)) {
            Outcome::Conflict(_) => true,
            Outcome::Stable => up.is_true(l),
        }
    })
}

/// Absorption of an implicate `clause` by `formula`.
pub fn is_absorbed(clause: &Clause, formula: &CnfFormula) -> Result<bool> {
    if let Some(v) = clause.max_var() {
        if v.index() >= formula.num_vars() {
            return Err(Error::VariableOutOfRange(v));
        }
    }
    if !entails(formula, clause) {
        return Err(Error::NotImplicate);
    }
    Ok(absorbed_by_up(&mut UnitPropagator::new(formula), clause))
}

/// Clause indices in input order, or shuffled by `seed`.
fn removal_order(len: usize, seed: Option<u64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    order
}

fn subformula(formula: &CnfFormula, keep: &[bool]) -> CnfFormula {
    CnfFormula::from_clauses(
        formula.num_vars(),
        formula
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(c, _)| c.clone()),
    )
    .expect("clauses come from a valid formula")
}

pub fn reduce_pc_irredundant(formula: &CnfFormula) -> Result<CnfFormula> {
    reduce_pc_irredundant_with(formula, None, &DeciderConfig::default())
}

/// Removes, one at a time, each clause absorbed by the remaining ones.
/// A PC input stays PC and equivalent under each removal.
pub fn reduce_pc_irredundant_with(
    formula: &CnfFormula,
    seed: Option<u64>,
    config: &DeciderConfig,
) -> Result<CnfFormula> {
    if !is_pc_with(formula, config)?.verdict {
        return Err(Error::NotPc);
    }
    let mut keep = vec![true; formula.len()];
    for i in removal_order(formula.len(), seed) {
        keep[i] = false;
        let rest = subformula(formula, &keep);
        if !absorbed_by_up(&mut UnitPropagator::new(&rest), &formula.clauses()[i]) {
            keep[i] = true;
        }
    }
    let reduced = subformula(formula, &keep);
    if !is_pc_with(&reduced, config)?.verdict {
        return Err(Error::NotPc);
    }
    Ok(reduced)
}

pub fn reduce_urc_irredundant(formula: &CnfFormula) -> Result<CnfFormula> {
    reduce_urc_irredundant_with(formula, None, &DeciderConfig::default())
}

/// Repeats greedy passes until no clause can go without losing
/// equivalence or unit refutation completeness.
pub fn reduce_urc_irredundant_with(
    formula: &CnfFormula,
    seed: Option<u64>,
    config: &DeciderConfig,
) -> Result<CnfFormula> {
    if !is_urc_with(formula, config)?.verdict {
        return Err(Error::NotUrc);
    }
    let mut keep = vec![true; formula.len()];
    loop {
        let mut changed = false;
        for i in removal_order(formula.len(), seed) {
            if !keep[i] {
                continue;
            }
            keep[i] = false;
            let rest = subformula(formula, &keep);
            let removable = entails(&rest, &formula.clauses()[i]) && is_urc_with(&rest, config)?.verdict;
            if removable {
                changed = true;
            } else {
                keep[i] = true;
            }
        }
        if !changed {
            break;
        }
    }
    let reduced = subformula(formula, &keep);
    debug_assert!(equivalent(&reduced, formula).unwrap_or(false));
    Ok(reduced)
}
