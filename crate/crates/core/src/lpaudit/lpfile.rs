//! LP text format (the CPLEX-style `Maximize / Subject To / Bounds / End`
//! layout read by most solvers).

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::primal::PrimalLp;
use crate::error::{Error, Result};

/// Terms per output line inside a long expression.
const TERMS_PER_LINE: usize = 6;

/// A named `<=` row as read back from text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(String, f64)>,
    pub rhs: f64,
}

/// Solver-independent view of a maximization LP with non-negative variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub objective: Vec<(String, f64)>,
    pub rows: Vec<LpRow>,
    pub variables: Vec<String>,
}

impl PrimalLp {
    /// The model as it appears in the text format.
    pub fn to_model(&self) -> LpModel {
        let name = |i: usize| self.variables[i].clone();
        LpModel {
            objective: self
                .objective
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, &c)| (name(i), c))
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|r| LpRow {
                    name: r.name.clone(),
                    terms: r.coeffs.iter().map(|&(i, c)| (name(i), c)).collect(),
                    rhs: r.rhs,
                })
                .collect(),
            variables: self.variables.clone(),
        }
    }
}

fn write_expr(out: &mut String, terms: &[(String, f64)]) {
    if terms.is_empty() {
        out.push_str(" 0");
    }
    for (k, (var, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if *c < 0.0 { "-" } else { "+" };
        let mag = c.abs();
        if k == 0 && sign == "+" {
            out.push(' ');
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag != 1.0 {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(var);
    }
}

/// Renders a model; identical models give identical bytes.
pub fn model_to_string(model: &LpModel, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "\\ {line}");
    }
    out.push_str("Maximize\n obj:");
    write_expr(&mut out, &model.objective);
    out.push_str("\nSubject To\n");
    for row in &model.rows {
        let _ = write!(out, " {}:", row.name);
        write_expr(&mut out, &row.terms);
        let _ = writeln!(out, " <= {}", row.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        let _ = writeln!(out, " {v} >= 0");
    }
    out.push_str("End\n");
    out
}

/// The primal as LP text.
pub fn primal_to_string(lp: &PrimalLp) -> String {
    let comment = format!(
        "factor-revealing primal, Q = {}, M = {}, K = {}",
        lp.q_max, lp.m_count, lp.k
    );
    model_to_string(&lp.to_model(), &comment)
}

/// Writes the primal to `path`.
pub fn export_lp(lp: &PrimalLp, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, primal_to_string(lp))?;
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Done,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::LpParse { line, msg: msg.into() }
}

/// Parses `+ 2 x - y + 0.5 z` token streams into terms.
fn parse_terms(tokens: &[(usize, String)]) -> Result<Vec<(String, f64)>> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for (line, tok) in tokens {
        match tok.as_str() {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            t => {
                if let Ok(v) = t.parse::<f64>() {
                    if coef.is_some() {
                        return Err(parse_err(*line, format!("two coefficients in a row at '{t}'")));
                    }
                    coef = Some(v);
                } else {
                    terms.push((t.to_string(), sign * coef.take().unwrap_or(1.0)));
                    sign = 1.0;
                }
            }
        }
    }
    if coef.is_some_and(|c| c != 0.0) {
        return Err(parse_err(
            tokens.last().map_or(0, |t| t.0),
            "constant term in expression",
        ));
    }
    Ok(terms)
}

/// Row being read: first line, name and `(line, token)` pairs.
type PendingRow = (usize, String, Vec<(usize, String)>);

/// Parses text produced by [`model_to_string`] (or hand-written text in the
/// same subset: one objective, `<=` rows, `>= 0` bounds).
pub fn parse_lp(text: &str) -> Result<LpModel> {
    let mut section = Section::Preamble;
    let mut objective_tokens: Vec<(usize, String)> = Vec::new();
    let mut rows = Vec::new();
    let mut current: Option<PendingRow> = None;
    let mut variables = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('\\').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content.to_ascii_lowercase().as_str() {
            "maximize" | "maximise" | "max" => {
                section = Section::Objective;
                continue;
            }
            "minimize" | "minimise" | "min" => return Err(parse_err(line, "only maximization is supported")),
            "subject to" | "st" | "s.t." => {
                section = Section::Constraints;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        let tokens: Vec<String> = content.split_whitespace().map(str::to_string).collect();
        match section {
            Section::Preamble | Section::Done => return Err(parse_err(line, format!("unexpected '{content}'"))),
            Section::Objective => {
                let rest = match tokens.first() {
                    Some(t) if t.ends_with(':') && objective_tokens.is_empty() => &tokens[1..],
                    _ => &tokens[..],
                };
                objective_tokens.extend(rest.iter().map(|t| (line, t.clone())));
            }
            Section::Constraints => {
                let mut iter = tokens.into_iter().peekable();
                while let Some(tok) = iter.next() {
                    if let Some(name) = tok.strip_suffix(':') {
                        if current.is_some() {
                            return Err(parse_err(
                                line,
                                format!("row '{name}' starts before the last one ended"),
                            ));
                        }
                        current = Some((line, name.to_string(), Vec::new()));
                    } else if tok == "<=" {
                        let (_, name, toks) = current.take().ok_or_else(|| parse_err(line, "'<=' outside a row"))?;
                        let rhs = iter
                            .next()
                            .and_then(|t| t.parse::<f64>().ok())
                            .ok_or_else(|| parse_err(line, format!("row '{name}' lacks a numeric right-hand side")))?;
                        rows.push(LpRow {
                            name,
                            terms: parse_terms(&toks)?,
                            rhs,
                        });
                    } else if tok == ">=" || tok == "=" || tok == "<" || tok == ">" {
                        return Err(parse_err(line, format!("unsupported sense '{tok}'")));
                    } else {
                        let row = current.as_mut().ok_or_else(|| parse_err(line, "term outside a row"))?;
                        row.2.push((line, tok));
                    }
                }
            }
            Section::Bounds => match tokens.as_slice() {
                [v, op, zero] if op == ">=" && zero.parse::<f64>() == Ok(0.0) => variables.push(v.clone()),
                _ => return Err(parse_err(line, format!("unsupported bound '{content}'"))),
            },
        }
    }
    if let Some((line, name, _)) = current {
        return Err(parse_err(line, format!("row '{name}' never ends")));
    }
    if section != Section::Done {
        return Err(parse_err(text.lines().count(), "missing End"));
    }
    Ok(LpModel {
        objective: parse_terms(&objective_tokens)?,
        rows,
        variables,
    })
}

pub fn read_lp(path: impl AsRef<Path>) -> Result<LpModel> {
    parse_lp(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpaudit::primal::build_primal;
    use crate::mimic::PhaseGrid;

    #[test]
    fn round_trip_is_exact() {
        for (gamma, m, k) in [(1.0, 1, 1), (0.5, 2, 2), (0.0, 3, 1)] {
            let grid = PhaseGrid::new(gamma, m, 0.7 / m as f64, 1.3).unwrap();
            let lp = build_primal(&grid, k).unwrap();
            let text = primal_to_string(&lp);
            assert_eq!(parse_lp(&text).unwrap(), lp.to_model());
            assert_eq!(text, primal_to_string(&build_primal(&grid, k).unwrap()));
        }
    }

    #[test]
    fn names_encode_family() {
        let grid = PhaseGrid::new(1.0, 1, 1.0, 1.0).unwrap();
        let text = primal_to_string(&build_primal(&grid, 1).unwrap());
        assert!(text.contains(" opt_rel_q1: gF_1_0 + gF_1_1 + gS_1_0 + gS_1_1 <= 1\n"));
        assert!(text.contains(" mix_q0_l1:"));
    }

    #[test]
    fn rejects_other_senses() {
        let text = "Maximize\n obj: x\nSubject To\n c: x >= 1\nEnd\n";
        assert!(matches!(parse_lp(text), Err(Error::LpParse { line: 4, .. })));
    }
}
