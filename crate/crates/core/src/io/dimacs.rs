use std::fmt::Write;

use num_rational::BigRational;

use super::{parse_err, IoError};
use crate::formula::{Formula, Lit, Var};

/// Parses DIMACS CNF. Comment lines `c w <var> <p>/<q>` set `Pr(var = 1)`.
/// Clauses may span lines; a repeated literal is kept once.
pub fn parse_dimacs(text: &str) -> Result<Formula, IoError> {
    let mut header: Option<(u32, usize)> = None;
    let mut weights: Vec<(usize, Var, BigRational)> = Vec::new();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_line = 0;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        let mut tokens = t.split_whitespace();
        let first = tokens.next().expect("non-empty line");
        if first == "c" {
            if tokens.next() == Some("w") {
                let (var, p) = match (tokens.next(), tokens.next(), tokens.next()) {
                    (Some(v), Some(p), None) => (v, p),
                    _ => return Err(parse_err(line, "weight line must be `c w <var> <p>/<q>`")),
                };
                let var: Var = var
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad variable `{var}`")))?;
                let p: BigRational = p.parse().map_err(|_| parse_err(line, format!("bad weight `{p}`")))?;
                weights.push((line, var, p));
            }
            continue;
        }
        if first.starts_with('c') {
            continue;
        }
        if first == "p" {
            if header.is_some() {
                return Err(parse_err(line, "second header"));
            }
            if !clauses.is_empty() || !current.is_empty() {
                return Err(parse_err(line, "header after clauses"));
            }
            let fields: Vec<&str> = tokens.collect();
            match fields.as_slice() {
                ["cnf", n, m] => {
                    let n = n
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad variable count `{n}`")))?;
                    let m = m
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad clause count `{m}`")))?;
                    header = Some((n, m));
                }
                _ => return Err(parse_err(line, "header must be `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let (n, _) = header.ok_or_else(|| parse_err(line, "clause before header"))?;
        for tok in std::iter::once(first).chain(tokens) {
            let x: i64 = tok
                .parse()
                .map_err(|_| parse_err(line, format!("bad literal `{tok}`")))?;
            if x == 0 {
                clauses.push(finish_clause(std::mem::take(&mut current), current_line)?);
                continue;
            }
            if x.unsigned_abs() > n as u64 {
                return Err(parse_err(line, format!("literal {x} outside 1..={n}")));
            }
            if current.is_empty() {
                current_line = line;
            }
            current.push(Lit::from_dimacs(x as i32).expect("non-zero literal in range"));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing `p cnf` header"))?;
    if !current.is_empty() {
        clauses.push(finish_clause(current, current_line)?);
    }
    if clauses.len() != m {
        return Err(IoError::HeaderMismatch {
            declared: m,
            found: clauses.len(),
        });
    }
    let mut f = Formula::new(n, clauses)?;
    for (line, var, p) in weights {
        f.set_weight(var, p).map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(f)
}

fn finish_clause(mut lits: Vec<Lit>, line: usize) -> Result<Vec<Lit>, IoError> {
    lits.sort();
    lits.dedup();
    if let Some(w) = lits.windows(2).find(|w| w[0].var() == w[1].var()) {
        return Err(IoError::Tautology { line, var: w[0].var() });
    }
    Ok(lits)
}

/// Weight comments, header, then one clause per line.
pub fn serialize_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    for (v, p) in f.weights() {
        writeln!(out, "c w {v} {}/{}", p.numer(), p.denom()).expect("write to string");
    }
    writeln!(out, "p cnf {} {}", f.num_vars(), f.clauses().len()).expect("write to string");
    for c in f.clauses() {
        for l in c {
            write!(out, "{} ", l.to_dimacs()).expect("write to string");
        }
        out.push_str("0\n");
    }
    out
}
