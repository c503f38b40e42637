//! Counts the models of a small formula with every counting algorithm and
//! prints the search counters side by side.

use dpllcache::dpll::OrderPolicy;
use dpllcache::engine::{count_formula, solution_line, Algorithm};
use dpllcache::io::parse_dimacs;

const CNF: &str = "c the hypergraph of five clauses over five variables
p cnf 5 5
1 2 3 0
1 4 0
2 5 0
3 5 0
4 5 0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_dimacs(CNF)?;
    println!(
        "{:<13} {:<12} {:>9} {:>6} {:>6}",
        "algo", "result", "decisions", "hits", "peak"
    );
    for algo in Algorithm::COUNTING {
        let o = count_formula(&f, algo, &OrderPolicy::dynamic(), None)?;
        println!(
            "{:<13} {:<12} {:>9} {:>6} {:>6}",
            algo.name(),
            solution_line(&o.value).trim_start_matches("s "),
            o.stats.decisions,
            o.stats.cache_hits,
            o.stats.cache_peak
        );
    }
    Ok(())
}
