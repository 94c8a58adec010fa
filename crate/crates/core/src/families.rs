//! Generators for the formula families used to separate PC and URC
//! representations. Numbering of variables is fixed per family and given
//! on each generator.

use std::fmt;
use std::str::FromStr;

use crate::cnf::{Clause, CnfFormula, EncodingFormula, Lit, Var};
use crate::error::{Error, Result};
use crate::semantics::is_satisfiable;

/// Parameters above this would produce exponentially many clauses.
pub const MAX_EXPONENTIAL_PARAMETER: usize = 20;

fn lit(index: usize, positive: bool) -> Lit {
    Lit::new(Var::new(index as u32), positive)
}

fn pos(index: usize) -> Lit {
    lit(index, true)
}

fn neg(index: usize) -> Lit {
    lit(index, false)
}

fn at_least(name: &str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::InvalidParameter(format!("{name} must be at least {min}, got {value}")));
    }
    Ok(())
}

fn at_most(name: &str, value: usize, max: usize) -> Result<()> {
    if value > max {
        return Err(Error::InvalidParameter(format!("{name} must be at most {max}, got {value}")));
    }
    Ok(())
}

fn formula(num_vars: usize, clauses: Vec<Clause>) -> CnfFormula {
    CnfFormula::from_clauses(num_vars, clauses).expect("generated clauses stay in the universe")
}

/// The Horn base `(¬y_i ∨ z_i)` for `i < m` and `(¬z_1 ∨ … ∨ ¬z_{m−1})`
/// with `y_i = i` and `z_i = m − 1 + i`.
pub fn psi_horn_base(m: usize) -> Result<CnfFormula> {
    at_least("m", m, 2)?;
    let y = |i: usize| i;
    let z = |i: usize| m - 1 + i;
    let mut clauses: Vec<Clause> = (1..m).map(|i| Clause::new([neg(y(i)), pos(z(i))])).collect();
    clauses.push(Clause::new((1..m).map(|i| neg(z(i)))));
    Ok(formula(2 * m - 2, clauses))
}

/// The Horn formula over `3m + 1` variables with `x_i = i`,
/// `y_i = m + i`, `z_i = 2m − 1 + i`; the last three variables do not occur.
pub fn psi_horn(m: usize) -> Result<CnfFormula> {
    at_least("m", m, 3)?;
    let (x, y, z) = horn_names(m);
    let mut clauses: Vec<Clause> = (1..m)
        .map(|i| Clause::new([neg(x(i)), neg(y(i)), pos(z(i))]))
        .collect();
    clauses.push(Clause::new(std::iter::once(neg(x(m))).chain((1..m).map(|i| neg(z(i))))));
    clauses.extend(horn_cycle(m, x));
    Ok(formula(3 * m + 1, clauses))
}

fn horn_names(m: usize) -> (impl Fn(usize) -> usize, impl Fn(usize) -> usize, impl Fn(usize) -> usize) {
    (move |i| i, move |i| m + i, move |i| 2 * m - 1 + i)
}

fn horn_cycle(m: usize, x: impl Fn(usize) -> usize) -> Vec<Clause> {
    let mut clauses: Vec<Clause> = (1..m).map(|i| Clause::new([neg(x(i)), pos(x(i + 1))])).collect();
    clauses.push(Clause::new([neg(x(m)), pos(x(1))]));
    clauses
}

/// The smallest PC formula equivalent to [`psi_horn`]: the cycle on `x`
/// followed by `¬x_1 ∨ C` for every prime implicate `C` of the base,
/// binary ones first, then the long ones ordered by the bitmask of the
/// positions holding `¬y_i`.
pub fn psi_horn_pc(m: usize) -> Result<CnfFormula> {
    at_least("m", m, 3)?;
    at_most("m", m, MAX_EXPONENTIAL_PARAMETER)?;
    let (x, y, z) = horn_names(m);
    let mut clauses = horn_cycle(m, &x);
    for i in 1..m {
        clauses.push(Clause::new([neg(x(1)), neg(y(i)), pos(z(i))]));
    }
    for mask in 0u64..1 << (m - 1) {
        let body = (1..m).map(|i| if mask >> (i - 1) & 1 == 1 { neg(y(i)) } else { neg(z(i)) });
        clauses.push(Clause::new(std::iter::once(neg(x(1))).chain(body)));
    }
    Ok(formula(3 * m + 1, clauses))
}

/// Extends a satisfiable formula with clauses `C_1 … C_m` by fresh
/// variables `x_i = n + i`: the cycle `x_1 → … → x_m → x_1` and
/// `¬x_i ∨ C_i`.
pub fn cycle_extension(base: &CnfFormula) -> Result<CnfFormula> {
    let m = base.len();
    at_least("clause count", m, 2)?;
    if !is_satisfiable(base) {
        return Err(Error::Unsatisfiable);
    }
    let n = base.num_vars();
    let x = |i: usize| n + i;
    let mut clauses = horn_cycle(m, x);
    for (i, c) in base.iter().enumerate() {
        clauses.push(Clause::new(std::iter::once(neg(x(i + 1))).chain(c.iter())));
    }
    Ok(formula(n + m, clauses))
}

/// `x_i = i`, `a_i = n + i`, `b_i = 2n + i`.
pub fn psi_qhorn(n: usize) -> Result<CnfFormula> {
    at_least("n", n, 2)?;
    let x = |i: usize| i;
    let mut clauses = Vec::with_capacity(4 * n);
    for i in 1..=n {
        let (u, same) = if i < n { (x(i + 1), true) } else { (x(1), false) };
        let v = x(i);
        for guard in [n + i, 2 * n + i] {
            if same {
                clauses.push(Clause::new([neg(guard), neg(v), pos(u)]));
                clauses.push(Clause::new([neg(guard), pos(v), neg(u)]));
            } else {
                clauses.push(Clause::new([neg(guard), neg(u), neg(v)]));
                clauses.push(Clause::new([neg(guard), pos(u), pos(v)]));
            }
        }
    }
    Ok(formula(3 * n, clauses))
}

/// The `2^n` clauses `⋁ ¬e_i` with `e_i ∈ {a_i, b_i}`, enumerated with the
/// choice for `i = 1` most significant and `a` before `b`.
pub fn psi_qhorn_ubar(n: usize) -> Result<Vec<Clause>> {
    at_least("n", n, 2)?;
    at_most("n", n, MAX_EXPONENTIAL_PARAMETER)?;
    Ok((0u64..1 << n)
        .map(|mask| {
            Clause::new((1..=n).map(|i| {
                let pick_b = mask >> (n - i) & 1 == 1;
                neg(if pick_b { 2 * n + i } else { n + i })
            }))
        })
        .collect())
}

/// The linear PC encoding with auxiliary `c_i = 3n + i`.
pub fn psi_qhorn_pc(n: usize) -> Result<EncodingFormula> {
    at_least("n", n, 2)?;
    let c = |i: usize| 3 * n + i;
    let mut clauses = Vec::with_capacity(4 * n + 1);
    for i in 1..=n {
        clauses.push(Clause::new([neg(n + i), pos(c(i))]));
        clauses.push(Clause::new([neg(2 * n + i), pos(c(i))]));
    }
    clauses.push(Clause::new((1..=n).map(|i| neg(c(i)))));
    for i in 1..n {
        clauses.push(Clause::new([neg(c(i)), neg(i), pos(i + 1)]));
        clauses.push(Clause::new([neg(c(i)), pos(i), neg(i + 1)]));
    }
    clauses.push(Clause::new([neg(c(n)), neg(1), neg(n)]));
    clauses.push(Clause::new([neg(c(n)), pos(1), pos(n)]));
    EncodingFormula::new(formula(4 * n, clauses), (1..=n).map(|i| Var::new(c(i) as u32)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaVariant {
    Base,
    Prime,
    DoublePrime,
}

/// Nonempty even-sized subsets of `{1, …, m}` ordered by bitmask.
pub fn even_subsets(m: usize) -> Result<Vec<Vec<usize>>> {
    at_least("m", m, 2)?;
    at_most("m", m, MAX_EXPONENTIAL_PARAMETER)?;
    Ok((1u64..1 << m)
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(|mask| (1..=m).filter(|&i| mask >> (i - 1) & 1 == 1).collect())
        .collect())
}

/// Variables are interleaved per block: `a_i = 4i − 3`, `b_i = 4i − 2`,
/// `c_i = 4i − 1`, `d_i = 4i`. Clauses: `⋁ a_i`, then `δ_1 … δ_m`, then the
/// variant's extra clauses.
pub fn gamma(m: usize, variant: GammaVariant) -> Result<CnfFormula> {
    at_least("m", m, 2)?;
    let a = |i: usize| 4 * i - 3;
    let b = |i: usize| 4 * i - 2;
    let c = |i: usize| 4 * i - 1;
    let d = |i: usize| 4 * i;
    let mut clauses = vec![Clause::new((1..=m).map(|i| pos(a(i))))];
    for i in 1..=m {
        clauses.push(Clause::new([neg(a(i)), pos(b(i))]));
        clauses.push(Clause::new([neg(a(i)), pos(c(i))]));
        clauses.push(Clause::new([neg(b(i)), neg(c(i)), pos(d(i))]));
    }
    match variant {
        GammaVariant::Base => {}
        GammaVariant::Prime => {
            clauses.extend((1..=m).map(|i| Clause::new([neg(a(i)), pos(d(i))])));
        }
        GammaVariant::DoublePrime => {
            for set in even_subsets(m)? {
                clauses.push(Clause::new(
                    (1..=m).map(|i| if set.contains(&i) { pos(d(i)) } else { pos(a(i)) }),
                ));
            }
        }
    }
    Ok(formula(4 * m, clauses))
}

/// The clause of [`GammaVariant::DoublePrime`] that belongs to the subset.
pub fn gamma_extra_clause(m: usize, subset: &[usize]) -> Clause {
    Clause::new((1..=m).map(|i| if subset.contains(&i) { pos(4 * i) } else { pos(4 * i - 3) }))
}

/// The `2^{n−1}` clauses over `x_1 … x_n` each excluding one assignment of
/// even parity, so the formula holds exactly when `x_1 ⊕ … ⊕ x_n = 1`.
pub fn parity_cnf(n: usize) -> Result<CnfFormula> {
    at_least("n", n, 2)?;
    at_most("n", n, MAX_EXPONENTIAL_PARAMETER)?;
    let clauses = (0u64..1 << n)
        .filter(|bits| bits.count_ones() % 2 == 0)
        .map(|bits| Clause::new((1..=n).map(|i| lit(i, bits >> (i - 1) & 1 == 0))))
        .collect();
    Ok(formula(n, clauses))
}

/// The chain `y_i ⇔ y_{i−1} ⊕ x_i` for `i = 2 … n` with `y_1` folded into
/// `x_1`, four clauses per stage, and the unit `y_n`. Inputs `x_i = i`,
/// auxiliary `y_i = n + i − 1`.
pub fn parity_encoding(n: usize) -> Result<EncodingFormula> {
    at_least("n", n, 2)?;
    let y = |i: usize| if i == 1 { 1 } else { n + i - 1 };
    let mut clauses = Vec::with_capacity(4 * (n - 1) + 1);
    for i in 2..=n {
        let (out, prev, x) = (y(i), y(i - 1), i);
        clauses.push(Clause::new([neg(out), pos(prev), pos(x)]));
        clauses.push(Clause::new([neg(out), neg(prev), neg(x)]));
        clauses.push(Clause::new([pos(out), neg(prev), pos(x)]));
        clauses.push(Clause::new([pos(out), pos(prev), neg(x)]));
    }
    clauses.push(Clause::new([pos(y(n))]));
    EncodingFormula::new(formula(2 * n - 1, clauses), (2..=n).map(|i| Var::new(y(i) as u32)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    PsiHorn,
    PsiHornPc,
    CycleExt,
    PsiQHorn,
    PsiQHornPc,
    Gamma,
    GammaPrime,
    GammaDPrime,
    ParityEnc,
    ParityCnf,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::PsiHorn,
        Family::PsiHornPc,
        Family::CycleExt,
        Family::PsiQHorn,
        Family::PsiQHornPc,
        Family::Gamma,
        Family::GammaPrime,
        Family::GammaDPrime,
        Family::ParityEnc,
        Family::ParityCnf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PsiHorn => "psi_horn",
            Family::PsiHornPc => "psi_horn_pc",
            Family::CycleExt => "cycle_ext",
            Family::PsiQHorn => "psi_qhorn",
            Family::PsiQHornPc => "psi_qhorn_pc",
            Family::Gamma => "gamma",
            Family::GammaPrime => "gamma_prime",
            Family::GammaDPrime => "gamma_dprime",
            Family::ParityEnc => "parity_enc",
            Family::ParityCnf => "parity_cnf",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family `{s}`")))
    }
}

/// Fixtures that accompany some families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Companion {
    UBar(Vec<Clause>),
    EvenSubsets(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub encoding: EncodingFormula,
    pub companion: Option<Companion>,
}

/// One entry point for every family. `cycle_ext` extends the base of
/// [`psi_horn_base`] with `param` clauses.
pub fn generate(family: Family, param: usize) -> Result<Generated> {
    let plain = |f: CnfFormula| EncodingFormula::plain(f);
    let (encoding, companion) = match family {
        Family::PsiHorn => (plain(psi_horn(param)?), None),
        Family::PsiHornPc => (plain(psi_horn_pc(param)?), None),
        Family::CycleExt => (plain(cycle_extension(&psi_horn_base(param)?)?), None),
        Family::PsiQHorn => (
            plain(psi_qhorn(param)?),
            Some(Companion::UBar(psi_qhorn_ubar(param)?)),
        ),
        Family::PsiQHornPc => (psi_qhorn_pc(param)?, None),
        Family::Gamma => (plain(gamma(param, GammaVariant::Base)?), None),
        Family::GammaPrime => (plain(gamma(param, GammaVariant::Prime)?), None),
        Family::GammaDPrime => (
            plain(gamma(param, GammaVariant::DoublePrime)?),
            Some(Companion::EvenSubsets(even_subsets(param)?)),
        ),
        Family::ParityEnc => (parity_encoding(param)?, None),
        Family::ParityCnf => (plain(parity_cnf(param)?), None),
    };
    Ok(Generated { encoding, companion })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        for m in 3..=8 {
            let f = psi_horn(m).unwrap();
            assert_eq!((f.len(), f.num_vars()), (2 * m, 3 * m + 1));
            assert_eq!(psi_horn_pc(m).unwrap().len(), (1 << (m - 1)) + 2 * m - 1);
        }
        for n in 2..=6 {
            assert_eq!(psi_qhorn(n).unwrap().len(), 4 * n);
            assert_eq!(psi_qhorn_ubar(n).unwrap().len(), 1 << n);
            let enc = psi_qhorn_pc(n).unwrap();
            assert_eq!(enc.formula().len(), 4 * n + 1);
            assert_eq!(enc.aux_vars().len(), n);
        }
        for m in 2..=6 {
            assert_eq!(gamma(m, GammaVariant::Base).unwrap().len(), 3 * m + 1);
            assert_eq!(gamma(m, GammaVariant::Prime).unwrap().len(), 4 * m + 1);
            assert_eq!(gamma(m, GammaVariant::DoublePrime).unwrap().len(), 3 * m + (1 << (m - 1)));
        }
        for n in 2..=6 {
            assert_eq!(parity_cnf(n).unwrap().len(), 1 << (n - 1));
            let enc = parity_encoding(n).unwrap();
            assert_eq!(enc.formula().len(), 4 * (n - 1) + 1);
            assert_eq!(enc.aux_vars().len(), n - 1);
        }
    }

    #[test]
    fn ubar_for_two() {
        // a1=3 a2=4 b1=5 b2=6
        let u: Vec<Vec<i32>> = psi_qhorn_ubar(2).unwrap().iter().map(Clause::to_ints).collect();
        assert_eq!(u, vec![vec![-3, -4], vec![-3, -6], vec![-4, -5], vec![-5, -6]]);
    }

    #[test]
    fn parameter_checks() {
        assert!(psi_horn(2).is_err());
        assert!(gamma(1, GammaVariant::Base).is_err());
        assert!(parity_cnf(1).is_err());
        assert!(psi_horn_pc(40).is_err());
        let unsat = CnfFormula::from_ints(1, &[&[1], &[-1]]);
        assert_eq!(cycle_extension(&unsat).unwrap_err(), Error::Unsatisfiable);
        assert!(cycle_extension(&CnfFormula::from_ints(1, &[&[1]])).is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("psi".parse::<Family>().is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        for f in Family::ALL {
            assert_eq!(generate(f, 3).unwrap(), generate(f, 3).unwrap());
        }
    }
}
