//! Brute-force oracles and seeded instance builders shared by the
//! integration tests. Nothing here calls the solvers under test.
#![allow(dead_code)]

use dpllcache::formula::{Formula, Var};
use dpllcache::generators::gen_random;
use dpllcache::semiring::{Factor, Semiring, SemiringInstance, Value};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn satisfied(f: &Formula, bits: u64) -> bool {
    f.clauses()
        .iter()
        .all(|c| c.iter().any(|l| l.satisfied_by(bits >> (l.var() - 1) & 1 == 1)))
}

/// Number of satisfying assignments over `1..=num_vars`.
pub fn brute_count(f: &Formula) -> BigInt {
    let n = f.num_vars();
    assert!(n <= 24, "oracle limited to 24 variables");
    let hits = (0..1u64 << n).filter(|&b| satisfied(f, b)).count();
    BigInt::from(hits)
}

/// `Σ_models Π_v w(v)`, with `1/2` for variables without a weight.
pub fn brute_weighted(f: &Formula) -> BigRational {
    let n = f.num_vars();
    assert!(n <= 20, "oracle limited to 20 variables");
    let mut total = BigRational::zero();
    for bits in 0..1u64 << n {
        if !satisfied(f, bits) {
            continue;
        }
        let mut w = BigRational::one();
        for v in 1..=n {
            w *= f.weight_of(v, bits >> (v - 1) & 1 == 1);
        }
        total += w;
    }
    total
}

fn entry(f: &Factor, assignment: &[usize]) -> Value {
    let mut idx = 0;
    for (v, d) in f.scope().iter().zip(f.dims()) {
        idx = idx * d + assignment[*v as usize];
    }
    f.table()[idx].clone()
}

fn assignments(inst: &SemiringInstance) -> Vec<Vec<usize>> {
    let top = inst.vars().last().map_or(0, |v| v.0) as usize;
    let mut out = vec![vec![0; top + 1]];
    for &(v, d) in inst.vars() {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..d).map(move |x| {
                    let mut a = a.clone();
                    a[v as usize] = x;
                    a
                })
            })
            .collect();
    }
    out
}

fn consistent<'a>(inst: &SemiringInstance, evidence: &'a [(Var, usize)]) -> impl Iterator<Item = Vec<usize>> + 'a {
    assignments(inst)
        .into_iter()
        .filter(move |a| evidence.iter().all(|&(v, x)| a[v as usize] == x))
}

/// `max_x Π f(x)` over the assignments agreeing with `evidence`, reading
/// the tables directly.
pub fn exhaustive_max_product(inst: &SemiringInstance, evidence: &[(Var, usize)]) -> BigRational {
    consistent(inst, evidence)
        .map(|a| {
            inst.factors()
                .iter()
                .fold(BigRational::one(), |acc, f| match entry(f, &a) {
                    Value::Finite(r) => acc * r,
                    Value::NegInf => unreachable!("max-product tables are finite"),
                })
        })
        .max()
        .expect("at least one assignment")
}

/// `max_x Σ f(x)`, `-inf` when every assignment hits a `-inf` entry.
pub fn exhaustive_max_sum(inst: &SemiringInstance, evidence: &[(Var, usize)]) -> Value {
    consistent(inst, evidence)
        .map(|a| {
            inst.factors()
                .iter()
                .fold(Value::int(0), |acc, f| match (acc, entry(f, &a)) {
                    (Value::Finite(x), Value::Finite(y)) => Value::Finite(x + y),
                    _ => Value::NegInf,
                })
        })
        .max()
        .expect("at least one assignment")
}

/// `Σ_x Π f(x)` over rationals.
pub fn exhaustive_sum_product(inst: &SemiringInstance) -> BigRational {
    assignments(inst)
        .iter()
        .map(|a| {
            inst.factors()
                .iter()
                .fold(BigRational::one(), |acc, f| match entry(f, a) {
                    Value::Finite(r) => acc * r,
                    Value::NegInf => unreachable!("sum-product tables are finite"),
                })
        })
        .sum()
}

/// Random k-CNF with `n` in `lo..=hi` and up to `max_m` clauses.
pub fn random_cnf(rng: &mut ChaCha8Rng, lo: u32, hi: u32, max_m: u32) -> Formula {
    let n = rng.gen_range(lo..=hi);
    let k = rng.gen_range(2..=3).min(n);
    let m = rng.gen_range(1..=max_m);
    gen_random(n, m, k, rng.gen()).expect("valid generator arguments")
}

/// Assigns a random weight `p/q` with `0 < p < q <= 7` to about half the
/// variables.
pub fn random_weights(f: &mut Formula, rng: &mut ChaCha8Rng) {
    for v in 1..=f.num_vars() {
        if rng.gen_bool(0.5) {
            let q = rng.gen_range(2..=7);
            let p = rng.gen_range(1..q);
            f.set_weight(v, rat(p, q)).expect("weight in (0, 1)");
        }
    }
}

/// Random binary-variable instance with scopes of size 0..=3.
pub fn random_instance(rng: &mut ChaCha8Rng, max_vars: usize, semiring: Semiring) -> SemiringInstance {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=n + 3);
    let mut factors = Vec::with_capacity(m);
    for _ in 0..m {
        let arity = rng.gen_range(0..=3.min(n));
        let mut scope: Vec<Var> = Vec::with_capacity(arity);
        while scope.len() < arity {
            let v = rng.gen_range(1..=n as Var);
            if !scope.contains(&v) {
                scope.push(v);
            }
        }
        let table = (0..1usize << arity).map(|_| random_entry(rng, semiring)).collect();
        factors.push(Factor::binary(scope, table).expect("consistent table"));
    }
    SemiringInstance::new(vec![2; n], factors, semiring).expect("valid instance")
}

pub fn random_entry(rng: &mut ChaCha8Rng, semiring: Semiring) -> Value {
    match semiring {
        Semiring::Boolean => Value::int(rng.gen_bool(0.7) as i64),
        Semiring::SumProduct => Value::ratio(rng.gen_range(-2..=4), rng.gen_range(1..=3)),
        Semiring::MaxProduct => Value::ratio(rng.gen_range(0..=5), rng.gen_range(1..=3)),
        Semiring::MaxSum => {
            if rng.gen_bool(0.15) {
                Value::NegInf
            } else {
                Value::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=2))
            }
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
