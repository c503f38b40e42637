use num_rational::BigRational;
use num_traits::One;

use super::{Factor, Semiring, SemiringError, SemiringInstance, Value};
use crate::formula::{Assignment, Formula};

/// One 0/1 factor per clause, plus a unary factor `[1 - p, p]` for every
/// variable with an explicit weight `p`. Max-sum is rejected.
pub fn encode_cnf_as_instance(f: &Formula, semiring: Semiring) -> Result<SemiringInstance, SemiringError> {
    if semiring == Semiring::MaxSum {
        return Err(SemiringError::UnsupportedSemiring(semiring.name()));
    }
    let mut factors = Vec::with_capacity(f.clauses().len() + f.weights().len());
    for clause in f.clauses() {
        let scope = clause.iter().map(|l| l.var()).collect();
        // the one falsifying row sets every literal false
        let falsifying = clause.iter().fold(0, |acc, l| acc * 2 + usize::from(!l.is_positive()));
        let table = (0..1usize << clause.len())
            .map(|row| Value::int((row != falsifying) as i64))
            .collect();
        factors.push(Factor::binary(scope, table)?);
    }
    for (&var, p) in f.weights() {
        let table = vec![semiring.lift(BigRational::one() - p)?, semiring.lift(p.clone())?];
        factors.push(Factor::binary(vec![var], table)?);
    }
    SemiringInstance::new(vec![2; f.num_vars() as usize], factors, semiring)
}

fn with_evidence(
    domains: &[usize],
    factors: Vec<Factor>,
    evidence: &Assignment,
    semiring: Semiring,
) -> Result<SemiringInstance, SemiringError> {
    let mut inst = SemiringInstance::new(domains.to_vec(), factors, semiring)?;
    for (var, value) in evidence.iter() {
        inst = inst.condition(var, value as usize)?;
    }
    Ok(inst)
}

/// Most probable explanation: `(max, ×)` over the factors reduced by the
/// evidence. Evidence variables leave the instance.
pub fn make_instance_mpe(
    domains: &[usize],
    factors: Vec<Factor>,
    evidence: &Assignment,
) -> Result<SemiringInstance, SemiringError> {
    with_evidence(domains, factors, evidence, Semiring::MaxProduct)
}

/// Partition function: `(+, ×)` over the factors reduced by the evidence.
pub fn make_instance_partition(
    domains: &[usize],
    factors: Vec<Factor>,
    evidence: &Assignment,
) -> Result<SemiringInstance, SemiringError> {
    with_evidence(domains, factors, evidence, Semiring::SumProduct)
}

/// Additive objective maximization: `(max, +)`.
pub fn make_instance_maxsum(
    domains: &[usize],
    factors: Vec<Factor>,
    evidence: &Assignment,
) -> Result<SemiringInstance, SemiringError> {
    with_evidence(domains, factors, evidence, Semiring::MaxSum)
}
