use super::ReferenceError;
use crate::decomposition::ElimOrder;
use crate::formula::Var;
use crate::semiring::{Factor, Semiring, SemiringInstance, Value};

/// Combines every factor of `bucket` and sums `x` out of the product.
fn sum_out(bucket: &[Factor], x: Var, inst: &SemiringInstance, s: Semiring) -> Factor {
    let mut scope: Vec<Var> = bucket
        .iter()
        .flat_map(|f| f.scope().iter().copied())
        .filter(|&v| v != x)
        .collect();
    scope.sort_unstable();
    scope.dedup();
    let dims: Vec<usize> = scope.iter().map(|&v| inst.domain(v).expect("scope variable")).collect();
    let dx = inst.domain(x).expect("eliminated variable");
    let max_var = inst.vars().last().map_or(0, |v| v.0) as usize;
    let mut assignment = vec![0usize; max_var + 1];
    let rows: usize = dims.iter().product();
    let mut table = Vec::with_capacity(rows);
    for row in 0..rows {
        let mut r = row;
        for (i, &v) in scope.iter().enumerate().rev() {
            assignment[v as usize] = r % dims[i];
            r /= dims[i];
        }
        let mut acc = s.zero();
        for d in 0..dx {
            assignment[x as usize] = d;
            let prod = bucket.iter().fold(s.one(), |p, f| s.mul(&p, f.eval(&assignment)));
            acc = s.add(&acc, &prod);
        }
        table.push(acc);
    }
    Factor::new(scope, dims, table).expect("table matches scope")
}

/// Variable elimination along `pi`: each step collects the factors
/// mentioning the variable and replaces them by their product summed over
/// its domain.
pub fn ve_solve(inst: &SemiringInstance, pi: &ElimOrder) -> Result<Value, ReferenceError> {
    pi.check_permutation(&inst.var_ids())?;
    let s = inst.semiring();
    let mut pool: Vec<Factor> = inst.factors().to_vec();
    for &x in pi.as_slice() {
        let (bucket, rest): (Vec<Factor>, Vec<Factor>) = pool.into_iter().partition(|f| f.contains(x));
        pool = rest;
        pool.push(sum_out(&bucket, x, inst, s));
    }
    Ok(pool.iter().fold(s.one(), |acc, f| {
        s.mul(&acc, f.scalar_value().expect("all variables eliminated"))
    }))
}
