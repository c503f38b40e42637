//! One entry point per input kind that runs any solver by name, deriving
//! the structure it needs when none is supplied.
//!
//! Counts are reported as the weighted sum over all assignments, where a
//! variable without an explicit weight contributes `1/2 + 1/2 = 1` per
//! value, that is `P(f) · 2^u` for `u` unweighted variables. An unweighted
//! formula yields its model count.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use thiserror::Error;

use crate::decomposition::{
    branchdec_from_order, heuristic_order, hypergraph_of, static_order_from_branchdec, BranchDecomp, DecompError,
    OrderHeuristic,
};
use crate::dpll::{
    complete_static_order, count_dpll, run_component_cache, run_simple_cache, DpllError, OrderPolicy, OrderVariant,
    SearchStats,
};
use crate::formula::{Formula, Var};
use crate::io::{DecompDoc, IoError};
use crate::reference::{
    ao_solve, default_order, default_pseudo_tree, instance_hypergraph, rc_solve, ve_solve, CacheMode, ReferenceError,
};
use crate::semiring::{
    brute_force_sumprod, encode_cnf_as_instance, sumprod_dpll_cache, Semiring, SemiringError, SemiringInstance, Value,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Dpll(#[from] DpllError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("algorithm {algo} does not apply to {input}")]
    Unsupported { algo: Algorithm, input: &'static str },
}

/// Every solver reachable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dpll,
    SimpleCache,
    CompCache,
    CompSpace,
    Ve,
    RcSpace,
    RcCache,
    AoSpace,
    AoCache,
    DpllCache,
    Brute,
}

impl Algorithm {
    /// The algorithms applicable to CNF counting.
    pub const COUNTING: [Algorithm; 10] = [
        Algorithm::Dpll,
        Algorithm::SimpleCache,
        Algorithm::CompCache,
        Algorithm::CompSpace,
        Algorithm::Ve,
        Algorithm::RcSpace,
        Algorithm::RcCache,
        Algorithm::AoSpace,
        Algorithm::AoCache,
        Algorithm::Brute,
    ];

    /// The algorithms applicable to semiring instances.
    pub const SUMPROD: [Algorithm; 7] = [
        Algorithm::Ve,
        Algorithm::RcSpace,
        Algorithm::RcCache,
        Algorithm::AoSpace,
        Algorithm::AoCache,
        Algorithm::DpllCache,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dpll => "dpll",
            Algorithm::SimpleCache => "simple-cache",
            Algorithm::CompCache => "comp-cache",
            Algorithm::CompSpace => "comp-space",
            Algorithm::Ve => "ve",
            Algorithm::RcSpace => "rc-space",
            Algorithm::RcCache => "rc-cache",
            Algorithm::AoSpace => "ao-space",
            Algorithm::AoCache => "ao-cache",
            Algorithm::DpllCache => "dpll-cache",
            Algorithm::Brute => "brute",
        }
    }

    fn uses_policy(self) -> bool {
        matches!(
            self,
            Algorithm::Dpll
                | Algorithm::SimpleCache
                | Algorithm::CompCache
                | Algorithm::CompSpace
                | Algorithm::DpllCache
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::COUNTING
            .iter()
            .chain(&Algorithm::SUMPROD)
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Value and counters of one run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: Value,
    pub stats: SearchStats,
    /// Policy text for reports; `-` when the algorithm takes no policy.
    pub policy: String,
}

/// `s COUNT n` for integers, `s VALUE p/q` otherwise.
pub fn solution_line(v: &Value) -> String {
    match v {
        Value::Finite(r) if r.is_integer() => format!("s COUNT {}", r.numer()),
        other => format!("s VALUE {other}"),
    }
}

/// Static branching order read off a branch decomposition built from a
/// min-fill elimination order. Variables in no clause go last.
pub fn heuristic_static_order(f: &Formula) -> Vec<Var> {
    let h = hypergraph_of(f);
    let pi = heuristic_order(&h, OrderHeuristic::MinFill, None);
    let prefix = match branchdec_from_order(&h, &pi) {
        Ok(b) => static_order_from_branchdec(&b, &h).unwrap_or_default(),
        Err(_) => vec![],
    };
    complete_static_order(&prefix, f.num_vars())
}

/// Weighted count of `f` with the named algorithm.
///
/// `decomp` supplies the elimination order for `ve`, the branch
/// decomposition for `rc-*`, the pseudo tree for `ao-*`, and a static order
/// (an order or a branch decomposition) for the search counters.
pub fn count_formula(
    f: &Formula,
    algo: Algorithm,
    policy: &OrderPolicy,
    decomp: Option<&DecompDoc>,
) -> Result<Outcome, EngineError> {
    let scale = BigRational::from_integer(BigInt::from(2u8).pow(f.num_unweighted()));
    let policy = match (decomp, algo.uses_policy()) {
        (Some(d), true) => OrderPolicy {
            variant: OrderVariant::StaticList(static_order_from_doc(f, d)?),
            unit_propagation: policy.unit_propagation,
        },
        _ => policy.clone(),
    };
    let search = |p: BigRational, stats: SearchStats| Outcome {
        value: Value::Finite(p * &scale),
        stats,
        policy: policy.describe(),
    };
    match algo {
        Algorithm::Dpll => {
            let (p, stats) = count_dpll(f, &policy)?;
            Ok(search(p, stats))
        }
        Algorithm::SimpleCache => {
            let o = run_simple_cache(f, &policy, false)?;
            Ok(search(o.value, o.stats))
        }
        Algorithm::CompCache | Algorithm::CompSpace => {
            let o = run_component_cache(f, &policy, algo == Algorithm::CompSpace, false)?;
            Ok(search(o.value, o.stats))
        }
        Algorithm::DpllCache => Err(EngineError::Unsupported {
            algo,
            input: "CNF formulas",
        }),
        _ => {
            let inst = encode_cnf_as_instance(f, Semiring::SumProduct)?;
            solve_instance(&inst, algo, &policy, decomp)
        }
    }
}

fn static_order_from_doc(f: &Formula, d: &DecompDoc) -> Result<Vec<Var>, EngineError> {
    let prefix = match d {
        DecompDoc::Order(o) => o.as_slice().to_vec(),
        DecompDoc::Branch(b) => static_order_from_branchdec(b, &hypergraph_of(f))?,
        other => return Err(other.clone().into_order().expect_err("not an order").into()),
    };
    Ok(complete_static_order(&prefix, f.num_vars()))
}

/// Value of a semiring instance with the named algorithm.
pub fn solve_instance(
    inst: &SemiringInstance,
    algo: Algorithm,
    policy: &OrderPolicy,
    decomp: Option<&DecompDoc>,
) -> Result<Outcome, EngineError> {
    let plain = |value: Value, stats: SearchStats| Outcome {
        value,
        stats,
        policy: "-".to_string(),
    };
    match algo {
        Algorithm::Ve => {
            let pi = match decomp {
                Some(d) => d.clone().into_order()?,
                None => default_order(inst),
            };
            Ok(plain(ve_solve(inst, &pi)?, SearchStats::default()))
        }
        Algorithm::RcSpace | Algorithm::RcCache => {
            let mode = if algo == Algorithm::RcCache {
                CacheMode::Cache
            } else {
                CacheMode::Space
            };
            let b = match decomp {
                Some(d) => d.clone().into_branch()?,
                None => derived_branchdec(inst),
            };
            let (v, stats) = rc_solve(inst, &b, mode)?;
            Ok(plain(v, stats))
        }
        Algorithm::AoSpace | Algorithm::AoCache => {
            let mode = if algo == Algorithm::AoCache {
                CacheMode::Cache
            } else {
                CacheMode::Space
            };
            let t = match decomp {
                Some(d) => d.clone().into_pseudo_tree()?,
                None => default_pseudo_tree(inst),
            };
            let (v, stats) = ao_solve(inst, &t, mode)?;
            Ok(plain(v, stats))
        }
        Algorithm::DpllCache => {
            let (v, stats) = sumprod_dpll_cache(inst, policy)?;
            Ok(Outcome {
                value: v,
                stats,
                policy: policy.describe(),
            })
        }
        Algorithm::Brute => Ok(plain(brute_force_sumprod(inst)?, SearchStats::default())),
        _ => Err(EngineError::Unsupported {
            algo,
            input: "semiring instances",
        }),
    }
}

fn derived_branchdec(inst: &SemiringInstance) -> BranchDecomp {
    let (h, _) = instance_hypergraph(inst);
    // with no factor scopes there is nothing to decompose; the solver
    // ignores the tree in that case
    branchdec_from_order(&h, &default_order(inst)).unwrap_or_else(|_| BranchDecomp::from_parts(vec![], 0))
}
