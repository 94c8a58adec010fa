//! Literals, clauses, CNF formulas and partial assignments.
//!
//! Variables are 1-based indices into a contiguous universe `1..=n`. A
//! literal is stored as the code `2 * (var - 1) + negated`, so sorting
//! literals orders them by variable first and puts the positive literal
//! before the negative one.

use std::collections::HashSet;
use std::fmt;
use std::ops::Not;

use crate::error::{Error, Result};

/// A propositional variable, numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    /// Panics on 0, which is not a variable in DIMACS numbering.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    pub fn from_index(index: usize) -> Var {
        Var(index as u32 + 1)
    }

    /// 1-based DIMACS number.
    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based position in the universe.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit((var.0 - 1) * 2 + u32::from(!positive))
    }

    /// Returns `None` for 0.
    pub fn from_dimacs(value: i32) -> Option<Lit> {
        match value {
            0 => None,
            v => Some(Lit::new(Var(v.unsigned_abs()), v > 0)),
        }
    }

    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 / 2 + 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn is_negative(self) -> bool {
        !self.is_positive()
    }

    /// Dense index in `0..2n`, usable for per-literal tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of a duplicate-free, sorted set of literals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    /// Builds a clause from signed DIMACS integers. Panics on 0.
    pub fn from_ints(values: &[i32]) -> Clause {
        Clause::new(
            values
                .iter()
                .map(|&v| Lit::from_dimacs(v).expect("0 is not a literal")),
        )
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// Complementary literals are adjacent in the sorted order.
    pub fn is_tautology(&self) -> bool {
        self.lits.windows(2).any(|w| w[0] == !w[1])
    }

    pub fn positive_count(&self) -> usize {
        self.lits.iter().filter(|l| l.is_positive()).count()
    }

    pub fn is_horn(&self) -> bool {
        self.positive_count() <= 1
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.last().map(|l| l.var())
    }

    /// `self ⊆ other` as literal sets.
    pub fn subsumes(&self, other: &Clause) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.lits.iter();
        'outer: for lit in &self.lits {
            for candidate in rest.by_ref() {
                if candidate == lit {
                    continue 'outer;
                }
                if candidate > lit {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn without(&self, lit: Lit) -> Clause {
        Clause {
            lits: self.lits.iter().copied().filter(|&l| l != lit).collect(),
        }
    }

    pub fn to_ints(&self) -> Vec<i32> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.to_ints())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "⊥");
        }
        let parts: Vec<String> = self.lits.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(" ∨ "))
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        Clause::new(iter)
    }
}

/// A set of clauses over the universe `x1..=x_n`.
///
/// Clauses keep their insertion order; inserting a clause that is already
/// present is a no-op.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> CnfFormula {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn from_clauses(
        num_vars: usize,
        clauses: impl IntoIterator<Item = Clause>,
    ) -> Result<CnfFormula> {
        let mut formula = CnfFormula::new(num_vars);
        let mut seen = HashSet::new();
        for clause in clauses {
            formula.check_clause(&clause)?;
            if seen.insert(clause.clone()) {
                formula.clauses.push(clause);
            }
        }
        Ok(formula)
    }

    /// Test and generator helper; panics when a literal is out of range.
    pub fn from_ints(num_vars: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_clauses(num_vars, clauses.iter().map(|c| Clause::from_ints(c)))
            .expect("clause literal outside the universe")
    }

    fn check_clause(&self, clause: &Clause) -> Result<()> {
        match clause.max_var() {
            Some(v) if v.index() >= self.num_vars => Err(Error::VariableOutOfRange(v)),
            _ => Ok(()),
        }
    }

    /// Returns false when the clause was already present.
    pub fn push(&mut self, clause: Clause) -> Result<bool> {
        self.check_clause(&clause)?;
        if self.clauses.contains(&clause) {
            return Ok(false);
        }
        self.clauses.push(clause);
        Ok(true)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.num_vars).map(Var::from_index)
    }

    pub fn lits(&self) -> impl Iterator<Item = Lit> {
        (0..2 * self.num_vars).map(Lit::from_code)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn iter(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter()
    }

    /// Number of clauses, `|φ|`.
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Total number of literal occurrences, `‖φ‖`.
    pub fn length(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    pub fn contains(&self, clause: &Clause) -> bool {
        self.clauses.contains(clause)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    pub fn first_tautology(&self) -> Option<usize> {
        self.clauses.iter().position(Clause::is_tautology)
    }

    pub fn reject_tautologies(&self) -> Result<()> {
        match self.first_tautology() {
            Some(index) => Err(Error::TautologicalClause { index }),
            None => Ok(()),
        }
    }

    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(Clause::is_horn)
    }

    pub fn check_horn(&self) -> Result<()> {
        match self.clauses.iter().position(|c| !c.is_horn()) {
            Some(index) => Err(Error::NotHorn { index }),
            None => Ok(()),
        }
    }

    pub fn is_two_cnf(&self) -> bool {
        self.clauses.iter().all(|c| c.len() <= 2)
    }

    /// Copy of the formula without the clause at `index`.
    pub fn without_clause(&self, index: usize) -> CnfFormula {
        let mut clauses = self.clauses.clone();
        clauses.remove(index);
        CnfFormula {
            num_vars: self.num_vars,
            clauses,
        }
    }

    /// Same clauses over a (not smaller) universe.
    pub fn with_num_vars(&self, num_vars: usize) -> Result<CnfFormula> {
        CnfFormula::from_clauses(num_vars, self.clauses.iter().cloned())
    }

    pub fn check_assignment(&self, alpha: &PartialAssignment) -> Result<()> {
        match alpha.iter().map(Lit::var).max() {
            Some(v) if v.index() >= self.num_vars => Err(Error::VariableOutOfRange(v)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "⊤");
        }
        let parts: Vec<String> = self.clauses.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

/// A consistent set of literals, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartialAssignment {
    lits: Vec<Lit>,
}

impl PartialAssignment {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<PartialAssignment> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        if let Some(w) = lits.windows(2).find(|w| w[0] == !w[1]) {
            return Err(Error::InconsistentAssignment(w[0].var()));
        }
        Ok(PartialAssignment { lits })
    }

    pub fn empty() -> PartialAssignment {
        PartialAssignment::default()
    }

    /// Test helper; panics on 0 or on complementary literals.
    pub fn from_ints(values: &[i32]) -> PartialAssignment {
        PartialAssignment::new(
            values
                .iter()
                .map(|&v| Lit::from_dimacs(v).expect("0 is not a literal")),
        )
        .expect("inconsistent assignment")
    }

    /// The assignment `¬C` falsifying every literal of a clause.
    pub fn falsifying(clause: &Clause) -> Result<PartialAssignment> {
        PartialAssignment::new(clause.iter().map(|l| !l))
    }

    pub(crate) fn from_sorted_unchecked(lits: Vec<Lit>) -> PartialAssignment {
        PartialAssignment { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        if self.contains(var.positive()) {
            Some(true)
        } else if self.contains(var.negative()) {
            Some(false)
        } else {
            None
        }
    }

    pub fn satisfies(&self, clause: &Clause) -> bool {
        clause.iter().any(|l| self.contains(l))
    }

    pub fn is_subset(&self, other: &PartialAssignment) -> bool {
        self.lits.iter().all(|&l| other.contains(l))
    }

    pub fn with(&self, lit: Lit) -> Result<PartialAssignment> {
        PartialAssignment::new(self.lits.iter().copied().chain(std::iter::once(lit)))
    }

    pub fn without(&self, lit: Lit) -> PartialAssignment {
        PartialAssignment {
            lits: self.lits.iter().copied().filter(|&l| l != lit).collect(),
        }
    }

    pub fn to_ints(&self) -> Vec<i32> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }

    /// Every consistent assignment of `size` literals over `num_vars`
    /// variables, in lexicographic order of the sorted literal lists.
    pub fn all_of_size(num_vars: usize, size: usize) -> Vec<PartialAssignment> {
        fn extend(n: usize, size: usize, from: usize, current: &mut Vec<Lit>, out: &mut Vec<PartialAssignment>) {
            if current.len() == size {
                out.push(PartialAssignment { lits: current.clone() });
                return;
            }
            for code in from..2 * n {
                let lit = Lit::from_code(code);
                if current.last().is_some_and(|&last| last.var() == lit.var()) {
                    continue;
                }
                current.push(lit);
                extend(n, size, code + 1, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        if size <= num_vars {
            extend(num_vars, size, 0, &mut Vec::with_capacity(size), &mut out);
        }
        out
    }

    /// All `3^n` assignments, shortest first.
    pub fn all(num_vars: usize) -> impl Iterator<Item = PartialAssignment> {
        (0..=num_vars).flat_map(move |k| PartialAssignment::all_of_size(num_vars, k))
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lits.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A CNF formula whose universe is split into input and auxiliary variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingFormula {
    formula: CnfFormula,
    aux: Vec<Var>,
}

impl EncodingFormula {
    pub fn new(formula: CnfFormula, aux: impl IntoIterator<Item = Var>) -> Result<EncodingFormula> {
        let mut aux: Vec<Var> = aux.into_iter().collect();
        aux.sort_unstable();
        aux.dedup();
        if let Some(&v) = aux.iter().find(|v| v.index() >= formula.num_vars()) {
            return Err(Error::VariableOutOfRange(v));
        }
        Ok(EncodingFormula { formula, aux })
    }

    /// An encoding without auxiliary variables.
    pub fn plain(formula: CnfFormula) -> EncodingFormula {
        EncodingFormula {
            formula,
            aux: Vec::new(),
        }
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn into_formula(self) -> CnfFormula {
        self.formula
    }

    pub fn aux_vars(&self) -> &[Var] {
        &self.aux
    }

    pub fn input_vars(&self) -> Vec<Var> {
        self.formula
            .vars()
            .filter(|v| self.aux.binary_search(v).is_err())
            .collect()
    }

    pub fn is_aux(&self, var: Var) -> bool {
        self.aux.binary_search(&var).is_ok()
    }
}

/// `φ(β)`: clauses satisfied by `beta` are dropped and literals falsified by
/// it are removed from the rest. A fully falsified clause stays as `⊥`.
pub fn apply_assignment(formula: &CnfFormula, beta: &PartialAssignment) -> CnfFormula {
    let mut out = CnfFormula::new(formula.num_vars());
    let mut seen = HashSet::new();
    for clause in formula.iter() {
        if beta.satisfies(clause) {
            continue;
        }
        let reduced = Clause::new(clause.iter().filter(|&l| !beta.contains(!l)));
        if seen.insert(reduced.clone()) {
            out.clauses.push(reduced);
        }
    }
    out
}

/// True iff every clause touched by `beta` is satisfied by it.
pub fn is_autark(formula: &CnfFormula, beta: &PartialAssignment) -> bool {
    formula.iter().all(|clause| {
        let touched = clause.iter().any(|l| beta.value(l.var()).is_some());
        !touched || beta.satisfies(clause)
    })
}
