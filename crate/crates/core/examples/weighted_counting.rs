//! Weighted counting as probability: each variable is true with its own
//! probability, and the counters return the probability that the formula
//! holds.

use dpllcache::dpll::{count_component_cache, OrderPolicy};
use dpllcache::formula::Formula;
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // rain -> wet, sprinkler -> wet, and the grass is wet
    let (rain, sprinkler, wet) = (1, 2, 3);
    let f = Formula::from_dimacs_clauses(3, &[vec![-rain, wet], vec![-sprinkler, wet], vec![wet]])?
        .with_weight(rain as u32, BigRational::new(1.into(), 5.into()))?
        .with_weight(sprinkler as u32, BigRational::new(1.into(), 3.into()))?;

    let (p_wet, _) = count_component_cache(&f, &OrderPolicy::dynamic(), false)?;
    println!("P(constraints hold)         = {p_wet}");

    // conditioning on rain: add the unit clause and divide
    let mut clauses: Vec<Vec<i32>> = f
        .clauses()
        .iter()
        .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
        .collect();
    clauses.push(vec![rain]);
    let mut g = Formula::from_dimacs_clauses(3, &clauses)?;
    for (v, p) in f.weights() {
        g.set_weight(*v, p.clone())?;
    }
    let (p_joint, _) = count_component_cache(&g, &OrderPolicy::dynamic(), false)?;
    println!("P(rain, constraints hold)   = {p_joint}");
    println!("P(rain | constraints hold)  = {}", p_joint / p_wet);
    Ok(())
}
