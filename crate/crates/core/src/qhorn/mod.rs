//! q-Horn formulas: recognition by a small feasibility search, the split
//! into a Horn part and a part with weight-½ variables, satisfiability
//! through 2-SAT, and compilation into a unit refutation complete
//! encoding whose auxiliary variables name the binary clauses derivable
//! from the weight-½ projection.

mod twosat;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cnf::{apply_assignment, Clause, CnfFormula, EncodingFormula, Lit, Var};
use crate::error::{Error, Result};
use crate::propagation::{Outcome, UnitPropagator};

pub use twosat::two_sat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Zero,
    Half,
    One,
}

impl Weight {
    /// The weight counted in halves.
    pub fn halves(self) -> u32 {
        match self {
            Weight::Zero => 0,
            Weight::Half => 1,
            Weight::One => 2,
        }
    }

    pub fn complement(self) -> Weight {
        match self {
            Weight::Zero => Weight::One,
            Weight::Half => Weight::Half,
            Weight::One => Weight::Zero,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weight::Zero => "0",
            Weight::Half => "1/2",
            Weight::One => "1",
        })
    }
}

/// A valuation `γ`, stored as the weight of each positive literal;
/// `γ(¬x) = 1 − γ(x)` holds by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    weights: Vec<Weight>,
}

impl Valuation {
    pub fn new(weights: Vec<Weight>) -> Valuation {
        Valuation { weights }
    }

    pub fn uniform(num_vars: usize, weight: Weight) -> Valuation {
        Valuation {
            weights: vec![weight; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn var_weight(&self, var: Var) -> Weight {
        self.weights[var.index()]
    }

    pub fn weight(&self, lit: Lit) -> Weight {
        let w = self.var_weight(lit.var());
        if lit.is_positive() {
            w
        } else {
            w.complement()
        }
    }

    pub fn clause_halves(&self, clause: &Clause) -> u32 {
        clause.iter().map(|l| self.weight(l).halves()).sum()
    }

    /// Every clause weighs at most 1.
    pub fn witnesses(&self, formula: &CnfFormula) -> bool {
        self.num_vars() == formula.num_vars() && formula.iter().all(|c| self.clause_halves(c) <= 2)
    }
}

/// Finds a valuation witnessing that `formula` is q-Horn, or reports
/// [`Error::NotQHorn`]. A 2-CNF gets `½` everywhere; otherwise variables
/// are tried in index order with weights 1, 0, ½.
pub fn recognize_qhorn(formula: &CnfFormula) -> Result<Valuation> {
    formula.reject_tautologies()?;
    let n = formula.num_vars();
    if formula.is_two_cnf() {
        return Ok(Valuation::uniform(n, Weight::Half));
    }
    let mut occurs: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for (i, clause) in formula.iter().enumerate() {
        for lit in clause.iter() {
            occurs[lit.var().index()].push((i, lit.is_positive()));
        }
    }
    let mut search = Search {
        occurs,
        sums: vec![0; formula.len()],
        weights: Vec::with_capacity(n),
    };
    if search.extend() {
        Ok(Valuation::new(search.weights))
    } else {
        Err(Error::NotQHorn)
    }
}

struct Search {
    occurs: Vec<Vec<(usize, bool)>>,
    sums: Vec<u32>,
    weights: Vec<Weight>,
}

impl Search {
    fn extend(&mut self) -> bool {
        let v = self.weights.len();
        if v == self.occurs.len() {
            return true;
        }
        for w in [Weight::One, Weight::Zero, Weight::Half] {
            let mut ok = true;
            for &(c, positive) in &self.occurs[v] {
                let add = if positive { w } else { w.complement() }.halves();
                self.sums[c] += add;
                ok &= self.sums[c] <= 2;
            }
            if ok {
                self.weights.push(w);
                if self.extend() {
                    return true;
                }
                self.weights.pop();
            }
            for &(c, positive) in &self.occurs[v] {
                self.sums[c] -= if positive { w } else { w.complement() }.halves();
            }
        }
        false
    }
}

/// A q-Horn formula after renaming every weight-0 variable, split into the
/// clauses over weight-1 variables and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QHornSplit {
    /// Variables whose polarity was flipped.
    pub renaming: Vec<Var>,
    pub x1: Vec<Var>,
    pub x2: Vec<Var>,
    /// Horn clauses over `x1`, renamed.
    pub phi1: CnfFormula,
    /// Clauses with one or two `x2` variables, renamed.
    pub phi2: CnfFormula,
}

impl QHornSplit {
    pub fn rename(&self, lit: Lit) -> Lit {
        if self.renaming.binary_search(&lit.var()).is_ok() {
            !lit
        } else {
            lit
        }
    }

    pub fn is_x2(&self, var: Var) -> bool {
        self.x2.binary_search(&var).is_ok()
    }

    pub fn num_vars(&self) -> usize {
        self.phi1.num_vars()
    }
}

pub fn normalize(formula: &CnfFormula, valuation: &Valuation) -> Result<QHornSplit> {
    if valuation.num_vars() != formula.num_vars() {
        return Err(Error::UniverseMismatch(format!(
            "valuation over {} variables, formula over {}",
            valuation.num_vars(),
            formula.num_vars()
        )));
    }
    formula.reject_tautologies()?;
    if !valuation.witnesses(formula) {
        return Err(Error::InvalidParameter(
            "valuation does not witness the q-Horn property".into(),
        ));
    }
    let n = formula.num_vars();
    let mut renaming = Vec::new();
    let mut x1 = Vec::new();
    let mut x2 = Vec::new();
    for v in formula.vars() {
        match valuation.var_weight(v) {
            Weight::Zero => {
                renaming.push(v);
                x1.push(v);
            }
            Weight::One => x1.push(v),
            Weight::Half => x2.push(v),
        }
    }
    let mut split = QHornSplit {
        renaming,
        x1,
        x2,
        phi1: CnfFormula::new(n),
        phi2: CnfFormula::new(n),
    };
    for clause in formula.iter() {
        let renamed = Clause::new(clause.iter().map(|l| split.rename(l)));
        if renamed.iter().any(|l| split.is_x2(l.var())) {
            split.phi2.push(renamed)?;
        } else {
            split.phi1.push(renamed)?;
        }
    }
    Ok(split)
}

/// Satisfiability in four steps: propagate in `φ₁`, collect the derived
/// literals `β`, keep the clauses of `φ₂(β)` inside `lit(x₂)`, and decide
/// that 2-CNF.
pub fn qhorn_sat(split: &QHornSplit) -> bool {
    let mut up = UnitPropagator::new(&split.phi1);
    if let Outcome::Conflict(_) = up.propagate([]) {
        return false;
    }
    let beta = crate::cnf::PartialAssignment::new(up.trail().iter().copied()).expect("stable trail");
    let reduced = apply_assignment(&split.phi2, &beta);
    let inner = CnfFormula::from_clauses(
        split.num_vars(),
        reduced
            .iter()
            .filter(|c| c.iter().all(|l| split.is_x2(l.var())))
            .cloned(),
    )
    .expect("subset of a valid formula");
    two_sat(&inner)
}

/// Recognizes, normalizes and decides in one call.
pub fn qhorn_satisfiable(formula: &CnfFormula) -> Result<bool> {
    let valuation = recognize_qhorn(formula)?;
    Ok(qhorn_sat(&normalize(formula, &valuation)?))
}

/// Canonical key of a binary clause.
fn key(u: Lit, v: Lit) -> (Lit, Lit) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

fn resolve(a: (Lit, Lit), b: (Lit, Lit)) -> Option<Vec<Lit>> {
    let clashes: Vec<Lit> = [a.0, a.1].into_iter().filter(|&l| l == !b.0 || l == !b.1).collect();
    let [pivot] = clashes[..] else { return None };
    let mut lits: Vec<Lit> = [a.0, a.1, b.0, b.1]
        .into_iter()
        .filter(|&l| l != pivot && l != !pivot)
        .collect();
    lits.sort_unstable();
    lits.dedup();
    Some(lits)
}

/// `φ_q⁺`: every binary clause derivable by resolution from the `x₂`
/// projection of `φ₂`, sorted.
pub fn phi_q_plus(split: &QHornSplit) -> Vec<Clause> {
    let mut seeds = Vec::new();
    for clause in split.phi2.iter() {
        let proj: Vec<Lit> = clause.iter().filter(|l| split.is_x2(l.var())).collect();
        if let [u, v] = proj[..] {
            seeds.push(key(u, v));
        }
    }
    binary_closure(seeds)
        .into_iter()
        .map(|(u, v)| Clause::new([u, v]))
        .collect()
}

fn binary_closure(seeds: impl IntoIterator<Item = (Lit, Lit)>) -> BTreeSet<(Lit, Lit)> {
    let mut set = BTreeSet::new();
    let mut queue = Vec::new();
    for k in seeds {
        if set.insert(k) {
            queue.push(k);
        }
    }
    while let Some(a) = queue.pop() {
        let current: Vec<(Lit, Lit)> = set.iter().copied().collect();
        for b in current {
            if let Some(lits) = resolve(a, b) {
                if let [u, v] = lits[..] {
                    let k = key(u, v);
                    if set.insert(k) {
                        queue.push(k);
                    }
                }
            }
        }
    }
    set
}

/// Auxiliary variable `⟦u ∨ v⟧` for each clause of `φ_q⁺`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetaClauseMap {
    vars: BTreeMap<(Lit, Lit), Var>,
}

impl MetaClauseMap {
    pub fn get(&self, u: Lit, v: Lit) -> Option<Var> {
        self.vars.get(&key(u, v)).copied()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Lit, Lit), Var)> + '_ {
        self.vars.iter().map(|(&k, &v)| (k, v))
    }

    fn lit(&self, pair: (Lit, Lit)) -> Lit {
        self.vars[&pair].positive()
    }
}

#[derive(Clone, Debug)]
pub struct Compilation {
    pub encoding: EncodingFormula,
    pub valuation: Valuation,
    pub split: QHornSplit,
    pub meta: MetaClauseMap,
    /// Clauses contributed by each of the six groups, in emission order.
    pub group_sizes: [usize; 6],
}

impl Compilation {
    /// `2 |x₂|²`, the bound on the number of auxiliary variables.
    pub fn aux_bound(&self) -> usize {
        2 * self.split.x2.len() * self.split.x2.len()
    }
}

pub fn compile_urc_encoding(formula: &CnfFormula) -> Result<EncodingFormula> {
    Ok(compile(formula)?.encoding)
}

pub fn compile(formula: &CnfFormula) -> Result<Compilation> {
    let valuation = recognize_qhorn(formula)?;
    compile_with_valuation(formula, &valuation)
}

/// Emits the six clause groups in order:
/// 1. source clauses with at most one `x₂` variable,
/// 2. the other source clauses with their `x₂` pair replaced by `⟦u∨v⟧`,
/// 3. `¬⟦u∨v⟧ ∨ ¬⟦¬v∨w⟧ ∨ ⟦u∨w⟧`,
/// 4. `¬⟦u∨v⟧ ∨ ¬⟦u∨¬v⟧ ∨ u`,
/// 5. `¬⟦u∨v⟧ ∨ u ∨ v`,
/// 6. `¬u ∨ ⟦u∨v⟧` and `¬v ∨ ⟦u∨v⟧`.
pub fn compile_with_valuation(formula: &CnfFormula, valuation: &Valuation) -> Result<Compilation> {
    let split = normalize(formula, valuation)?;
    let n = formula.num_vars();
    let plus = phi_q_plus(&split);
    let meta = MetaClauseMap {
        vars: plus
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.lits()[0], c.lits()[1]), Var::from_index(n + i)))
            .collect(),
    };
    let pairs: Vec<(Lit, Lit)> = meta.vars.keys().copied().collect();
    let mut groups: [Vec<Clause>; 6] = Default::default();

    // x₂ variables are never renamed, so source clauses are used verbatim
    for clause in formula.iter() {
        let (inner, outer): (Vec<Lit>, Vec<Lit>) = clause.iter().partition(|l| split.is_x2(l.var()));
        match inner[..] {
            [u, v] => groups[1].push(Clause::new(
                outer.into_iter().chain([meta.lit(key(u, v))]),
            )),
            _ => groups[0].push(clause.clone()),
        }
    }
    for (i, &a) in pairs.iter().enumerate() {
        for &b in &pairs[i + 1..] {
            match resolve(a, b).as_deref() {
                Some(&[u, w]) => groups[2].push(Clause::new([
                    !meta.lit(a),
                    !meta.lit(b),
                    meta.lit(key(u, w)),
                ])),
                Some(&[u]) => groups[3].push(Clause::new([!meta.lit(a), !meta.lit(b), u])),
                _ => {}
            }
        }
    }
    for &(u, v) in &pairs {
        let y = meta.lit((u, v));
        groups[4].push(Clause::new([!y, u, v]));
        groups[5].push(Clause::new([!u, y]));
        groups[5].push(Clause::new([!v, y]));
    }

    let mut out = CnfFormula::new(n + pairs.len());
    let mut group_sizes = [0; 6];
    for (g, clauses) in groups.into_iter().enumerate() {
        for clause in clauses {
            if out.push(clause)? {
                group_sizes[g] += 1;
            }
        }
    }
    let encoding = EncodingFormula::new(out, meta.vars.values().copied())?;
    Ok(Compilation {
        encoding,
        valuation: valuation.clone(),
        split,
        meta,
        group_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: i32) -> Lit {
        Lit::from_dimacs(v).unwrap()
    }

    #[test]
    fn two_cnf_gets_all_halves() {
        let f = CnfFormula::from_ints(3, &[&[1, 2], &[-2, 3]]);
        assert_eq!(recognize_qhorn(&f).unwrap(), Valuation::uniform(3, Weight::Half));
    }

    #[test]
    fn horn_gets_weight_one() {
        let f = CnfFormula::from_ints(3, &[&[-1, -2, 3], &[1]]);
        let v = recognize_qhorn(&f).unwrap();
        assert_eq!(v, Valuation::uniform(3, Weight::One));
        let split = normalize(&f, &v).unwrap();
        assert!(split.phi2.is_empty());
        assert!(split.renaming.is_empty());
    }

    #[test]
    fn odd_triangle_is_not_qhorn() {
        let f = CnfFormula::from_ints(3, &[&[1, 2, 3], &[-1, -2, -3]]);
        assert_eq!(recognize_qhorn(&f).unwrap_err(), Error::NotQHorn);
    }

    #[test]
    fn renaming_flips_weight_zero() {
        // two positive literals: one of them must be flipped
        let f = CnfFormula::from_ints(3, &[&[1, 2, -3]]);
        let v = recognize_qhorn(&f).unwrap();
        let split = normalize(&f, &v).unwrap();
        assert!(split.phi1.is_horn());
        assert!(!split.renaming.is_empty());
    }

    #[test]
    fn sat_on_small_cases() {
        assert!(qhorn_satisfiable(&CnfFormula::from_ints(2, &[&[1, 2]])).unwrap());
        let f = CnfFormula::from_ints(2, &[&[1], &[-1]]);
        let split = normalize(&f, &Valuation::uniform(2, Weight::One)).unwrap();
        assert!(!qhorn_sat(&split));
    }

    #[test]
    fn binary_closure_examples() {
        let c = binary_closure([key(lit(1), lit(2)), key(lit(-2), lit(3))]);
        assert_eq!(c.len(), 3);
        assert!(c.contains(&key(lit(1), lit(3))));
        let c = binary_closure([key(lit(1), lit(2)), key(lit(-1), lit(-2))]);
        assert_eq!(c.len(), 2);
        let c = binary_closure([key(lit(1), lit(2))]);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn compiles_the_worked_example() {
        // g=1 u=2 v=3 w=4: (¬g∨u∨v)(¬v∨w)
        let f = CnfFormula::from_ints(4, &[&[-1, 2, 3], &[-3, 4]]);
        let valuation = Valuation::new(vec![Weight::One, Weight::Half, Weight::Half, Weight::Half]);
        let c = compile_with_valuation(&f, &valuation).unwrap();
        assert_eq!(c.meta.len(), 3);
        // keys sorted: (u,v) (u,w) (¬v,w) → aux 5, 6, 7
        assert_eq!(c.meta.get(lit(2), lit(3)), Some(Var::new(5)));
        assert_eq!(c.meta.get(lit(4), lit(2)), Some(Var::new(6)));
        assert_eq!(c.meta.get(lit(-3), lit(4)), Some(Var::new(7)));
        assert_eq!(c.group_sizes, [0, 2, 1, 0, 3, 6]);
        let f2 = c.encoding.formula();
        for clause in [&[-1, 5][..], &[7], &[-5, -7, 6], &[-5, 2, 3], &[-2, 5]] {
            assert!(f2.contains(&Clause::from_ints(clause)), "{clause:?}");
        }
    }

    #[test]
    fn horn_input_compiles_to_itself() {
        let f = CnfFormula::from_ints(3, &[&[-1, -2, 3], &[1], &[-3, 2, -1]]);
        let c = compile(&f).unwrap();
        assert!(c.encoding.aux_vars().is_empty());
        assert_eq!(c.encoding.formula(), &f);
    }
}
