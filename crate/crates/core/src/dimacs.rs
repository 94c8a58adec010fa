//! DIMACS CNF reading and writing.
//!
//! Besides the plain format, a comment line `c aux <v1> <v2> ... 0` placed
//! before the problem line marks auxiliary variables of an encoding. Any
//! other comment is ignored.

use std::fmt::Write;

use crate::cnf::{Clause, CnfFormula, EncodingFormula, Lit, Var};
use crate::error::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses DIMACS text. Formulas without a `c aux` line come back as an
/// encoding with no auxiliary variables.
pub fn parse_dimacs(text: &str) -> Result<EncodingFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut aux: Vec<(usize, i64)> = Vec::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut clause_start = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            let mut tokens = rest.split_whitespace();
            if (rest.is_empty() || rest.starts_with(char::is_whitespace))
                && tokens.next() == Some("aux")
            {
                if header.is_some() {
                    return Err(parse_error(line_no, "`c aux` must precede the problem line"));
                }
                let mut terminated = false;
                for tok in tokens {
                    let v: i64 = tok
                        .parse()
                        .map_err(|_| parse_error(line_no, format!("bad auxiliary variable `{tok}`")))?;
                    if v == 0 {
                        terminated = true;
                        break;
                    }
                    if v < 0 {
                        return Err(parse_error(line_no, "auxiliary variables must be positive"));
                    }
                    aux.push((line_no, v));
                }
                if !terminated {
                    return Err(parse_error(line_no, "`c aux` line is not terminated by 0"));
                }
            }
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_error(line_no, "duplicate problem line"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 4 || tokens[0] != "p" || tokens[1] != "cnf" {
                return Err(parse_error(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let vars: usize = tokens[2]
                .parse()
                .map_err(|_| parse_error(line_no, "bad variable count"))?;
            let count: usize = tokens[3]
                .parse()
                .map_err(|_| parse_error(line_no, "bad clause count"))?;
            if vars > i32::MAX as usize {
                return Err(parse_error(line_no, "variable count too large"));
            }
            header = Some((vars, count));
            continue;
        }
        let (num_vars, _) = header.ok_or_else(|| parse_error(line_no, "clause before problem line"))?;
        for tok in line.split_whitespace() {
            let value: i64 = tok
                .parse()
                .map_err(|_| parse_error(line_no, format!("bad literal `{tok}`")))?;
            if current.is_empty() {
                clause_start = line_no;
            }
            if value == 0 {
                clauses.push(Clause::new(current.drain(..)));
                continue;
            }
            if value.unsigned_abs() as usize > num_vars {
                return Err(parse_error(
                    line_no,
                    format!("variable {} exceeds declared count {num_vars}", value.abs()),
                ));
            }
            current.push(Lit::from_dimacs(value as i32).expect("nonzero"));
        }
    }

    let (num_vars, _) = header.ok_or_else(|| parse_error(text.lines().count().max(1), "missing problem line"))?;
    if !current.is_empty() {
        return Err(parse_error(clause_start, "clause is not terminated by 0"));
    }
    for &(line_no, v) in &aux {
        if v as usize > num_vars {
            return Err(parse_error(
                line_no,
                format!("auxiliary variable {v} exceeds declared count {num_vars}"),
            ));
        }
    }
    let formula = CnfFormula::from_clauses(num_vars, clauses)?;
    EncodingFormula::new(formula, aux.into_iter().map(|(_, v)| Var::new(v as u32)))
}

/// Parses DIMACS text as a plain formula; a `c aux` line is accepted and
/// ignored.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    parse_dimacs(text).map(EncodingFormula::into_formula)
}

pub fn write_cnf(formula: &CnfFormula) -> String {
    let mut out = String::new();
    write_body(&mut out, formula);
    out
}

pub fn write_dimacs(encoding: &EncodingFormula) -> String {
    let mut out = String::new();
    if !encoding.aux_vars().is_empty() {
        out.push_str("c aux");
        for v in encoding.aux_vars() {
            write!(out, " {}", v.get()).unwrap();
        }
        out.push_str(" 0\n");
    }
    write_body(&mut out, encoding.formula());
    out
}

fn write_body(out: &mut String, formula: &CnfFormula) {
    writeln!(out, "p cnf {} {}", formula.num_vars(), formula.len()).unwrap();
    for clause in formula.iter() {
        for lit in clause.iter() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
}
