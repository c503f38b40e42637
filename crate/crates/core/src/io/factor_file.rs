use std::fmt::Write;

use num_rational::BigRational;

use super::{parse_err, IoError};
use crate::formula::Var;
use crate::semiring::{Factor, Semiring, SemiringInstance, Value};

/// Parses the factor format:
///
/// ```text
/// sumprod <numvars>
/// <domain sizes>
/// <numfactors>
/// <scope size> <var ids...>     (per factor)
/// <table entries>               (row-major, last scope variable fastest)
/// ```
///
/// Entries are integers, `p/q` rationals or `-inf`. Blank lines and lines
/// starting with `c` are skipped.
pub fn parse_factor_file(text: &str, semiring: Semiring) -> Result<SemiringInstance, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
    let mut next = |what: &str| lines.next().ok_or_else(|| parse_err(0, format!("missing {what}")));

    let (line, head) = next("header")?;
    let num_vars: usize = match head.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["sumprod", n] => n
            .parse()
            .map_err(|_| parse_err(line, format!("bad variable count `{n}`")))?,
        _ => return Err(parse_err(line, "header must be `sumprod <numvars>`")),
    };

    let (line, doms) = next("domain sizes")?;
    let domains: Vec<usize> = ints(line, doms)?;
    if domains.len() != num_vars {
        return Err(parse_err(
            line,
            format!("{} domain sizes for {num_vars} variables", domains.len()),
        ));
    }
    if domains.contains(&0) {
        return Err(parse_err(line, "domain sizes must be positive"));
    }

    let (line, count) = next("factor count")?;
    let count: usize = count
        .parse()
        .map_err(|_| parse_err(line, format!("bad factor count `{count}`")))?;

    let mut factors = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, scope_line) = next("factor scope")?;
        let fields: Vec<i64> = ints(line, scope_line)?;
        let (size, vars) = fields
            .split_first()
            .ok_or_else(|| parse_err(line, "empty scope line"))?;
        if *size as usize != vars.len() || *size < 0 {
            return Err(parse_err(
                line,
                format!("scope size {size} but {} variables listed", vars.len()),
            ));
        }
        let mut scope: Vec<Var> = Vec::with_capacity(vars.len());
        for &v in vars {
            if v < 1 || v as usize > num_vars {
                return Err(IoError::ScopeOutOfRange { line, var: v, num_vars });
            }
            scope.push(v as Var);
        }
        let dims: Vec<usize> = scope.iter().map(|&v| domains[v as usize - 1]).collect();
        let expected: usize = dims.iter().product();

        let (line, table_line) = next("factor table")?;
        let table = table_line
            .split_whitespace()
            .map(|tok| entry(line, tok, semiring))
            .collect::<Result<Vec<_>, _>>()?;
        if table.len() != expected {
            return Err(IoError::TableLengthMismatch {
                line,
                expected,
                found: table.len(),
            });
        }
        factors.push(Factor::new(scope, dims, table)?);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "unexpected content after the last factor"));
    }
    Ok(SemiringInstance::new(domains, factors, semiring)?)
}

fn ints<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>, IoError> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad integer `{t}`"))))
        .collect()
}

fn entry(line: usize, tok: &str, semiring: Semiring) -> Result<Value, IoError> {
    let v = if tok == "-inf" {
        Value::NegInf
    } else {
        let r: BigRational = tok
            .parse()
            .map_err(|_| parse_err(line, format!("bad table entry `{tok}`")))?;
        Value::Finite(r)
    };
    semiring.check(&v).map_err(|e| parse_err(line, e.to_string()))?;
    Ok(v)
}

/// Inverse of [`parse_factor_file`] for instances over variables `1..=n`.
pub fn serialize_factor_file(inst: &SemiringInstance) -> String {
    let mut out = String::new();
    let n = inst.vars().last().map_or(0, |v| v.0);
    writeln!(out, "sumprod {n}").expect("write to string");
    let doms: Vec<String> = (1..=n).map(|v| inst.domain(v).unwrap_or(1).to_string()).collect();
    writeln!(out, "{}", doms.join(" ")).expect("write to string");
    writeln!(out, "{}", inst.factors().len()).expect("write to string");
    for f in inst.factors() {
        let scope: Vec<String> = f.scope().iter().map(|v| v.to_string()).collect();
        writeln!(out, "{} {}", scope.len(), scope.join(" ")).expect("write to string");
        let table: Vec<String> = f.table().iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", table.join(" ")).expect("write to string");
    }
    out
}
