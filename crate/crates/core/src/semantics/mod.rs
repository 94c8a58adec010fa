//! Exact semantic reasoning at desk scale: models, entailment, the semantic
//! closure `cl_sem`, prime implicates, equivalence and the encoding check.

mod primes;
pub mod solver;

use crate::cnf::{Clause, CnfFormula, EncodingFormula, Lit, PartialAssignment, Var};
use crate::error::{Error, Result};
use crate::propagation::all_literals;

pub use primes::{prime_implicates, prime_implicates_with_limit, DEFAULT_PRIME_LIMIT};
pub use solver::Solver;

/// Largest universe [`enumerate_models`] accepts unless told otherwise.
pub const DEFAULT_MODEL_LIMIT: usize = 24;

/// A boolean function given by its onset. Bit `i` of an onset vector is the
/// value of `input_vars[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    input_vars: Vec<Var>,
    onset: Vec<u64>,
}

impl FunctionTable {
    pub fn new(input_vars: Vec<Var>, onset: impl IntoIterator<Item = u64>) -> Result<FunctionTable> {
        if input_vars.len() > 63 {
            return Err(Error::LimitExceeded {
                vars: input_vars.len(),
                limit: 63,
            });
        }
        let width = input_vars.len();
        let mut onset: Vec<u64> = onset.into_iter().collect();
        if let Some(&bad) = onset.iter().find(|&&v| v >> width != 0) {
            return Err(Error::InvalidParameter(format!(
                "onset vector {bad:#b} is wider than {width} bits"
            )));
        }
        onset.sort_unstable();
        onset.dedup();
        Ok(FunctionTable { input_vars, onset })
    }

    /// Tabulates `predicate` over all `2^n` input vectors.
    pub fn from_predicate(input_vars: Vec<Var>, predicate: impl Fn(u64) -> bool) -> Result<FunctionTable> {
        let n = input_vars.len();
        if n > DEFAULT_MODEL_LIMIT {
            return Err(Error::LimitExceeded {
                vars: n,
                limit: DEFAULT_MODEL_LIMIT,
            });
        }
        let onset: Vec<u64> = (0..1u64 << n).filter(|&bits| predicate(bits)).collect();
        FunctionTable::new(input_vars, onset)
    }

    pub fn input_vars(&self) -> &[Var] {
        &self.input_vars
    }

    pub fn onset(&self) -> &[u64] {
        &self.onset
    }

    pub fn len(&self) -> usize {
        self.onset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.onset.is_empty()
    }

    pub fn value(&self, bits: u64) -> bool {
        self.onset.binary_search(&bits).is_ok()
    }
}

/// All models of `formula` by depth-first search over the universe,
/// cutting a branch as soon as a clause is fully falsified.
pub fn enumerate_models(formula: &CnfFormula) -> Result<FunctionTable> {
    enumerate_models_with_limit(formula, DEFAULT_MODEL_LIMIT)
}

pub fn enumerate_models_with_limit(formula: &CnfFormula, limit: usize) -> Result<FunctionTable> {
    let n = formula.num_vars();
    let limit = limit.min(63);
    if n > limit {
        return Err(Error::LimitExceeded { vars: n, limit });
    }
    let vars: Vec<Var> = formula.vars().collect();
    if formula.has_empty_clause() {
        return FunctionTable::new(vars, []);
    }
    // clauses grouped by their largest variable: they become decided there
    let mut closing: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n];
    for clause in formula.iter() {
        let mut pos = 0u64;
        let mut neg = 0u64;
        for lit in clause.iter() {
            let bit = 1u64 << lit.var().index();
            if lit.is_positive() {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        let last = clause.max_var().expect("nonempty").index();
        closing[last].push((pos, neg));
    }
    let mut onset = Vec::new();
    let mut stack: Vec<(usize, u64)> = vec![(0, 0)];
    while let Some((depth, bits)) = stack.pop() {
        if depth == n {
            onset.push(bits);
            continue;
        }
        for value in [true, false] {
            let next = if value { bits | 1 << depth } else { bits };
            let falsified = closing[depth]
                .iter()
                .any(|&(pos, neg)| next & pos == 0 && next & neg == neg);
            if !falsified {
                stack.push((depth + 1, next));
            }
        }
    }
    FunctionTable::new(vars, onset)
}

pub fn is_satisfiable(formula: &CnfFormula) -> bool {
    Solver::from_formula(formula).solve(&[]).is_some()
}

/// `φ ⊨ C`, decided as unsatisfiability of `φ ∧ ¬C`.
pub fn entails(formula: &CnfFormula, clause: &Clause) -> bool {
    SemanticOracle::new(formula).entails(clause)
}

/// `cl_sem(φ, α)`: every literal `l` with `φ ∧ α ⊨ l`, all literals when
/// `φ ∧ α` is unsatisfiable. Sorted.
pub fn cl_sem(formula: &CnfFormula, alpha: &PartialAssignment) -> Vec<Lit> {
    SemanticOracle::new(formula).closure(alpha)
}

/// Equivalence over a shared universe, checked clause by clause in both
/// directions.
pub fn equivalent(left: &CnfFormula, right: &CnfFormula) -> Result<bool> {
    if left.num_vars() != right.num_vars() {
        return Err(Error::UniverseMismatch(format!(
            "{} vs {} variables",
            left.num_vars(),
            right.num_vars()
        )));
    }
    let mut l = SemanticOracle::new(left);
    let mut r = SemanticOracle::new(right);
    Ok(right.iter().all(|c| l.entails(c)) && left.iter().all(|c| r.entails(c)))
}

/// Whether `encoding` projected onto its input variables is `function`.
pub fn is_encoding_of(encoding: &EncodingFormula, function: &FunctionTable) -> Result<bool> {
    let inputs = encoding.input_vars();
    if inputs != function.input_vars() {
        return Err(Error::UniverseMismatch(
            "encoding inputs differ from the function's variables".into(),
        ));
    }
    if inputs.len() > DEFAULT_MODEL_LIMIT {
        return Err(Error::LimitExceeded {
            vars: inputs.len(),
            limit: DEFAULT_MODEL_LIMIT,
        });
    }
    let mut solver = Solver::from_formula(encoding.formula());
    let mut assumptions = Vec::with_capacity(inputs.len());
    for bits in 0..1u64 << inputs.len() {
        assumptions.clear();
        assumptions.extend(
            inputs
                .iter()
                .enumerate()
                .map(|(i, &v)| Lit::new(v, bits >> i & 1 == 1)),
        );
        if solver.is_satisfiable(&assumptions) != function.value(bits) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A reusable satisfiability oracle for one formula.
pub struct SemanticOracle {
    solver: Solver,
    num_vars: usize,
}

impl SemanticOracle {
    pub fn new(formula: &CnfFormula) -> SemanticOracle {
        SemanticOracle {
            solver: Solver::from_formula(formula),
            num_vars: formula.num_vars(),
        }
    }

    pub fn model(&mut self, assumptions: &[Lit]) -> Option<Vec<bool>> {
        self.solver.solve(assumptions)
    }

    pub fn is_satisfiable(&mut self, assumptions: &[Lit]) -> bool {
        self.solver.is_satisfiable(assumptions)
    }

    pub fn entails(&mut self, clause: &Clause) -> bool {
        if clause.is_tautology() {
            return true;
        }
        let negated: Vec<Lit> = clause.iter().map(|l| !l).collect();
        !self.solver.is_satisfiable(&negated)
    }

    pub fn closure(&mut self, alpha: &PartialAssignment) -> Vec<Lit> {
        let mut assumptions: Vec<Lit> = alpha.lits().to_vec();
        let Some(model) = self.solver.solve(&assumptions) else {
            return all_literals(self.num_vars);
        };
        // only literals true in every model can be implied; each new model
        // found along the way rules out more candidates
        let mut candidate: Vec<Option<Lit>> = (0..self.num_vars)
            .map(|i| {
                let var = Var::from_index(i);
                alpha
                    .value(var)
                    .is_none()
                    .then(|| Lit::new(var, model[i]))
            })
            .collect();
        let mut implied: Vec<Lit> = alpha.lits().to_vec();
        for i in 0..self.num_vars {
            let Some(lit) = candidate[i] else { continue };
            assumptions.push(!lit);
            match self.solver.solve(&assumptions) {
                None => implied.push(lit),
                Some(other) => {
                    for (j, slot) in candidate.iter_mut().enumerate().skip(i + 1) {
                        if let Some(l) = *slot {
                            if other[j] != l.is_positive() {
                                *slot = None;
                            }
                        }
                    }
                }
            }
            assumptions.pop();
        }
        implied.sort_unstable();
        implied
    }
}
