//! One factor graph, four questions: partition function, satisfiability,
//! most probable explanation under evidence, and best additive score.

use dpllcache::dpll::OrderPolicy;
use dpllcache::engine::{solve_instance, Algorithm};
use dpllcache::formula::Assignment;
use dpllcache::semiring::{
    make_instance_maxsum, make_instance_mpe, make_instance_partition, Factor, Semiring, SemiringError,
    SemiringInstance, Value,
};

fn table(xs: &[(i64, i64)]) -> Vec<Value> {
    xs.iter().map(|&(p, q)| Value::ratio(p, q)).collect()
}

/// Support of a factor: 1 where the entry is non-zero.
fn support(f: &Factor) -> Result<Factor, SemiringError> {
    let table = f
        .table()
        .iter()
        .map(|v| Semiring::Boolean.lift(v.as_rational().cloned().unwrap_or_default()))
        .collect::<Result<_, _>>()?;
    Factor::binary(f.scope().to_vec(), table)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a three-variable chain with a prior on the first variable
    let factors = vec![
        Factor::binary(vec![1], table(&[(3, 5), (2, 5)]))?,
        Factor::binary(vec![1, 2], table(&[(9, 10), (1, 10), (1, 5), (4, 5)]))?,
        Factor::binary(vec![2, 3], table(&[(7, 10), (3, 10), (1, 2), (1, 2)]))?,
    ];
    let domains = [2, 2, 2];
    let none = Assignment::new(3);
    let mut third_on = Assignment::new(3);
    third_on.assign(3, true)?;

    let policy = OrderPolicy::dynamic();
    let z = make_instance_partition(&domains, factors.clone(), &none)?;
    let sat = SemiringInstance::new(
        domains.to_vec(),
        factors.iter().map(support).collect::<Result<_, _>>()?,
        Semiring::Boolean,
    )?;
    let mpe = make_instance_mpe(&domains, factors.clone(), &third_on)?;
    let logs = vec![
        Factor::binary(vec![1, 2], table(&[(2, 1), (-1, 1), (0, 1), (3, 1)]))?,
        Factor::binary(vec![2, 3], table(&[(1, 1), (0, 1), (-2, 1), (1, 2)]))?,
    ];
    let best = make_instance_maxsum(&domains, logs, &none)?;

    for (label, inst) in [
        ("partition", &z),
        ("satisfiable", &sat),
        ("mpe | x3=1", &mpe),
        ("max-sum", &best),
    ] {
        print!("{label:<12}");
        for algo in [
            Algorithm::Ve,
            Algorithm::RcCache,
            Algorithm::AoCache,
            Algorithm::DpllCache,
        ] {
            print!("  {}={}", algo.name(), solve_instance(inst, algo, &policy, None)?.value);
        }
        println!();
    }
    Ok(())
}
