//! Benchmark formulas: string-of-pearls, disjoint blocks and seeded random
//! k-CNF.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Formula, Lit, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}

/// Variable numbering for the string-of-pearls family with `n` holes and
/// `m` pearls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PearlsLayout {
    pub n: u32,
    pub m: u32,
}

impl PearlsLayout {
    /// Pearl `j` sits in hole `i` (both 1-based).
    pub fn placement(&self, i: u32, j: u32) -> Var {
        debug_assert!((1..=self.n).contains(&i) && (1..=self.m).contains(&j));
        (i - 1) * self.m + j
    }

    /// Pearl `j` is red (true) or blue (false).
    pub fn color(&self, j: u32) -> Var {
        debug_assert!((1..=self.m).contains(&j));
        self.n * self.m + j
    }

    pub fn num_vars(&self) -> u32 {
        self.n * self.m + self.m
    }
}

/// The negated string-of-pearls principle SP_{m,n}: `m` pearls, `n` holes.
/// Unsatisfiable whenever `n >= 2`.
pub fn gen_pearls(m: u32, n: u32) -> Result<Formula, GeneratorError> {
    if m < 2 || n < 2 {
        return Err(GeneratorError::ParameterOutOfRange(format!(
            "pearls needs m >= 2 and n >= 2, got m={m}, n={n}"
        )));
    }
    let lay = PearlsLayout { n, m };
    let p = |i, j| Lit::pos(lay.placement(i, j));
    let np = |i, j| Lit::neg(lay.placement(i, j));
    let red = |j| Lit::pos(lay.color(j));
    let blue = |j| Lit::neg(lay.color(j));
    let mut clauses: Vec<Vec<Lit>> = Vec::new();

    // (1) every hole gets a pearl
    for i in 1..=n {
        clauses.push((1..=m).map(|j| p(i, j)).collect());
    }
    // (2) at most one pearl per hole
    for i in 1..=n {
        for j in 1..=m {
            for j2 in j + 1..=m {
                clauses.push(vec![np(i, j), np(i, j2)]);
            }
        }
    }
    // (3) a pearl goes to at most one hole
    for j in 1..=m {
        for i in 1..=n {
            for i2 in i + 1..=n {
                clauses.push(vec![np(i, j), np(i2, j)]);
            }
        }
    }
    // (4) first hole red, last hole blue
    for j in 1..=m {
        clauses.push(vec![np(1, j), red(j)]);
    }
    for j in 1..=m {
        clauses.push(vec![np(n, j), blue(j)]);
    }
    // (5) adjacent holes share a colour
    for i in 1..n {
        for j in 1..=m {
            for j2 in 1..=m {
                if j == j2 {
                    continue;
                }
                clauses.push(vec![np(i, j), np(i + 1, j2), blue(j), red(j2)]);
                clauses.push(vec![np(i, j), np(i + 1, j2), red(j), blue(j2)]);
            }
        }
    }
    Ok(Formula::new(lay.num_vars(), clauses).expect("pearls clauses are well-formed"))
}

/// `k` variable-disjoint 3-clauses `(x_{3i-2} ∨ x_{3i-1} ∨ x_{3i})`.
pub fn gen_blocks(k: u32) -> Result<Formula, GeneratorError> {
    if k == 0 {
        return Err(GeneratorError::ParameterOutOfRange("blocks needs k >= 1".into()));
    }
    let clauses = (1..=k).map(|i| (3 * i - 2..=3 * i).map(Lit::pos).collect()).collect();
    Ok(Formula::new(3 * k, clauses).expect("block clauses are well-formed"))
}

/// `m` clauses over `n` variables, each with `k` distinct variables and
/// uniform polarities, drawn from a ChaCha8 stream seeded with `seed`.
pub fn gen_random(n: u32, m: u32, k: u32, seed: u64) -> Result<Formula, GeneratorError> {
    if n == 0 || m == 0 || k == 0 || k > n {
        return Err(GeneratorError::ParameterOutOfRange(format!(
            "random needs 1 <= k <= n and m >= 1, got n={n}, m={m}, k={k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            sample(&mut rng, n as usize, k as usize)
                .into_iter()
                .map(|v| Lit::new(v as Var + 1, rng.gen_bool(0.5)))
                .collect()
        })
        .collect();
    Ok(Formula::new(n, clauses).expect("sampled variables are distinct"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dimacs(f: &Formula) -> Vec<Vec<i32>> {
        f.clauses()
            .iter()
            .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
            .collect()
    }

    #[test]
    fn pearls_2_2_shape() {
        let f = gen_pearls(2, 2).unwrap();
        assert_eq!(f.num_vars(), 6);
        assert_eq!(f.clauses().len(), 14);
        // group (4) sits after 2 + 2 + 2 clauses
        let g4 = &dimacs(&f)[6..10];
        assert_eq!(g4, &[vec![-1, 5], vec![-2, 6], vec![-3, -5], vec![-4, -6]]);
    }

    #[test]
    fn pearls_clause_counts() {
        for m in 2..=6u32 {
            for n in 2..=6u32 {
                let f = gen_pearls(m, n).unwrap();
                let expected = n + n * m * (m - 1) / 2 + m * n * (n - 1) / 2 + 2 * m + 2 * (n - 1) * m * (m - 1);
                assert_eq!(f.clauses().len() as u32, expected, "m={m} n={n}");
                assert_eq!(f.num_vars(), n * m + m);
            }
        }
    }

    #[test]
    fn pearls_layout_is_bijective() {
        let lay = PearlsLayout { n: 3, m: 4 };
        let mut seen: Vec<Var> = (1..=3)
            .flat_map(|i| (1..=4).map(move |j| lay.placement(i, j)))
            .chain((1..=4).map(|j| lay.color(j)))
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, (1..=lay.num_vars()).collect::<Vec<_>>());
    }

    #[test]
    fn pearls_rejects_small_parameters() {
        assert!(gen_pearls(1, 3).is_err());
        assert!(gen_pearls(3, 1).is_err());
    }

    #[test]
    fn blocks_shape() {
        let f = gen_blocks(3).unwrap();
        assert_eq!(f.num_vars(), 9);
        assert_eq!(dimacs(&f), vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert!(gen_blocks(0).is_err());
    }

    #[test]
    fn random_is_deterministic_and_well_formed() {
        let a = gen_random(6, 10, 3, 42).unwrap();
        let b = gen_random(6, 10, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.clauses().len(), 10);
        for c in a.clauses() {
            assert_eq!(c.len(), 3);
            let mut vars: Vec<_> = c.iter().map(|l| l.var()).collect();
            vars.dedup();
            assert_eq!(vars.len(), 3);
        }
        assert_ne!(a, gen_random(6, 10, 3, 43).unwrap());
        assert!(gen_random(2, 3, 3, 0).is_err());
    }
}
