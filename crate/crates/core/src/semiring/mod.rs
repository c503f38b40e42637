//! Sum-of-products over commutative semirings: values, factor tables,
//! instances, problem constructors and a component-caching search solver.
//!
//! An instance's value is the `⊕` over every assignment of its variables of
//! the `⊗` of its factors. Variables are identified by id and carry a finite
//! domain `0..d`.

mod factor;
mod problems;
mod solve;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::formula::Var;

pub use factor::{reduce_factor, Factor};
pub use problems::{encode_cnf_as_instance, make_instance_maxsum, make_instance_mpe, make_instance_partition};
pub use solve::{
    brute_force_sumprod, brute_force_sumprod_capped, instance_to_components, sumprod_dpll_cache, Components,
    BRUTE_FORCE_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiringError {
    #[error("factor table has {found} entries, scope needs {expected}")]
    TableLengthMismatch { expected: usize, found: usize },
    #[error("variable {0} repeats in a factor scope")]
    DuplicateScopeVariable(Var),
    #[error("factor scope mentions unknown variable {0}")]
    ScopeOutOfRange(Var),
    #[error("variable {var} has domain {found} in a factor but {expected} in the instance")]
    DomainMismatch { var: Var, expected: usize, found: usize },
    #[error("variable {0} has an empty domain")]
    EmptyDomain(Var),
    #[error("variable {0} is not in the factor scope")]
    VarNotInScope(Var),
    #[error("value {value} is outside the domain of variable {var}")]
    ValueOutOfDomain { var: Var, value: usize },
    #[error("instance has {states} assignments, above the cap of {cap}")]
    InstanceTooLarge { states: u128, cap: u128 },
    #[error("the {0} semiring cannot encode clauses")]
    UnsupportedSemiring(&'static str),
    #[error("{value} is not a value of the {semiring} semiring")]
    InvalidValue { value: String, semiring: &'static str },
}

/// An exact rational extended with negative infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    NegInf,
    Finite(BigRational),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Finite(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Value {
        Value::Finite(BigRational::new(p.into(), q.into()))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Finite(r) => Some(r),
            Value::NegInf => None,
        }
    }

    pub fn is_finite_zero(&self) -> bool {
        matches!(self, Value::Finite(r) if r.is_zero())
    }
}

impl From<BigRational> for Value {
    fn from(r: BigRational) -> Self {
        Value::Finite(r)
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::NegInf, Value::NegInf) => Ordering::Equal,
            (Value::NegInf, _) => Ordering::Less,
            (_, Value::NegInf) => Ordering::Greater,
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::NegInf => write!(f, "-inf"),
            Value::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Value::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// The shipped semirings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semiring {
    /// `(+, ×)` over rationals: model counting and partition functions.
    SumProduct,
    /// `(∨, ∧)` over `{0, 1}`.
    Boolean,
    /// `(max, ×)` over non-negative rationals.
    MaxProduct,
    /// `(max, +)` over rationals and `-inf`.
    MaxSum,
}

impl Semiring {
    pub const ALL: [Semiring; 4] = [
        Semiring::SumProduct,
        Semiring::Boolean,
        Semiring::MaxProduct,
        Semiring::MaxSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semiring::SumProduct => "count",
            Semiring::Boolean => "bool",
            Semiring::MaxProduct => "max-product",
            Semiring::MaxSum => "max-sum",
        }
    }

    pub fn from_name(name: &str) -> Option<Semiring> {
        Semiring::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn zero(self) -> Value {
        match self {
            Semiring::MaxSum => Value::NegInf,
            _ => Value::int(0),
        }
    }

    pub fn one(self) -> Value {
        match self {
            Semiring::MaxSum => Value::int(0),
            _ => Value::int(1),
        }
    }

    /// Whether `zero ⊗ a = zero` for every `a`. True for all shipped
    /// semirings.
    pub fn zero_annihilates(self) -> bool {
        true
    }

    pub fn is_zero(self, v: &Value) -> bool {
        *v == self.zero()
    }

    pub fn add(self, a: &Value, b: &Value) -> Value {
        match self {
            Semiring::SumProduct => Value::Finite(fin(a) + fin(b)),
            Semiring::Boolean => bool_value(!fin(a).is_zero() || !fin(b).is_zero()),
            Semiring::MaxProduct | Semiring::MaxSum => a.max(b).clone(),
        }
    }

    pub fn mul(self, a: &Value, b: &Value) -> Value {
        match self {
            Semiring::SumProduct | Semiring::MaxProduct => Value::Finite(fin(a) * fin(b)),
            Semiring::Boolean => bool_value(!fin(a).is_zero() && !fin(b).is_zero()),
            Semiring::MaxSum => match (a, b) {
                (Value::Finite(x), Value::Finite(y)) => Value::Finite(x + y),
                _ => Value::NegInf,
            },
        }
    }

    /// `⊕` of `one` taken `n` times: the contribution of a free variable
    /// with domain size `n`.
    pub fn one_sum(self, n: usize) -> Value {
        let one = self.one();
        (0..n).fold(self.zero(), |acc, _| self.add(&acc, &one))
    }

    /// Maps a rational into the value set. Booleans send every non-zero
    /// number to 1; max-product rejects negatives.
    pub fn lift(self, r: BigRational) -> Result<Value, SemiringError> {
        match self {
            Semiring::Boolean => Ok(bool_value(!r.is_zero())),
            Semiring::MaxProduct if r.is_negative() => Err(SemiringError::InvalidValue {
                value: r.to_string(),
                semiring: self.name(),
            }),
            _ => Ok(Value::Finite(r)),
        }
    }

    /// Checks that `v` belongs to the value set.
    pub fn check(self, v: &Value) -> Result<(), SemiringError> {
        let ok = match (self, v) {
            (Semiring::MaxSum, _) => true,
            (_, Value::NegInf) => false,
            (Semiring::SumProduct, _) => true,
            (Semiring::Boolean, Value::Finite(r)) => r.is_zero() || r.is_one(),
            (Semiring::MaxProduct, Value::Finite(r)) => !r.is_negative(),
        };
        if ok {
            Ok(())
        } else {
            Err(SemiringError::InvalidValue {
                value: v.to_string(),
                semiring: self.name(),
            })
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn fin(v: &Value) -> &BigRational {
    match v {
        Value::Finite(r) => r,
        Value::NegInf => panic!("-inf outside the max-sum semiring"),
    }
}

fn bool_value(b: bool) -> Value {
    Value::int(b as i64)
}

/// True when `running` is the semiring zero and zero annihilates `⊗`, so the
/// remaining factors of a product need not be computed.
pub fn early_zero_cutoff(running: &Value, semiring: Semiring) -> bool {
    semiring.zero_annihilates() && semiring.is_zero(running)
}

/// A sum-of-products problem: variables with finite domains, factors over
/// them, and the semiring combining them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiringInstance {
    /// `(variable, domain size)` sorted by variable.
    vars: Vec<(Var, usize)>,
    factors: Vec<Factor>,
    semiring: Semiring,
}

impl SemiringInstance {
    /// Variables `1..=domains.len()` with the given domain sizes.
    pub fn new(domains: Vec<usize>, factors: Vec<Factor>, semiring: Semiring) -> Result<Self, SemiringError> {
        let vars = domains
            .into_iter()
            .enumerate()
            .map(|(i, d)| (i as Var + 1, d))
            .collect();
        SemiringInstance::with_vars(vars, factors, semiring)
    }

    /// Arbitrary variable ids with their domain sizes.
    pub fn with_vars(
        mut vars: Vec<(Var, usize)>,
        factors: Vec<Factor>,
        semiring: Semiring,
    ) -> Result<Self, SemiringError> {
        vars.sort_unstable();
        for w in vars.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(SemiringError::DuplicateScopeVariable(w[0].0));
            }
        }
        if let Some(&(v, _)) = vars.iter().find(|(_, d)| *d == 0) {
            return Err(SemiringError::EmptyDomain(v));
        }
        let inst = SemiringInstance {
            vars,
            factors,
            semiring,
        };
        for f in &inst.factors {
            for (&v, &d) in f.scope().iter().zip(f.dims()) {
                match inst.domain(v) {
                    None => return Err(SemiringError::ScopeOutOfRange(v)),
                    Some(expected) if expected != d => {
                        return Err(SemiringError::DomainMismatch {
                            var: v,
                            expected,
                            found: d,
                        })
                    }
                    Some(_) => {}
                }
            }
            for x in f.table() {
                semiring.check(x)?;
            }
        }
        Ok(inst)
    }

    pub(crate) fn from_parts_unchecked(vars: Vec<(Var, usize)>, factors: Vec<Factor>, semiring: Semiring) -> Self {
        SemiringInstance {
            vars,
            factors,
            semiring,
        }
    }

    pub fn vars(&self) -> &[(Var, usize)] {
        &self.vars
    }

    pub fn var_ids(&self) -> Vec<Var> {
        self.vars.iter().map(|v| v.0).collect()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn domain(&self, v: Var) -> Option<usize> {
        self.vars.binary_search_by_key(&v, |x| x.0).ok().map(|i| self.vars[i].1)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn with_semiring(mut self, semiring: Semiring) -> Result<Self, SemiringError> {
        for f in &self.factors {
            for x in f.table() {
                semiring.check(x)?;
            }
        }
        self.semiring = semiring;
        Ok(self)
    }

    /// Number of complete assignments, saturating.
    pub fn state_count(&self) -> u128 {
        self.vars
            .iter()
            .fold(1u128, |acc, &(_, d)| acc.saturating_mul(d as u128))
    }

    /// Sets `var = value`: the variable leaves the instance and every factor
    /// mentioning it is reduced.
    pub fn condition(&self, var: Var, value: usize) -> Result<SemiringInstance, SemiringError> {
        let d = self.domain(var).ok_or(SemiringError::ScopeOutOfRange(var))?;
        if value >= d {
            return Err(SemiringError::ValueOutOfDomain { var, value });
        }
        let factors = self
            .factors
            .iter()
            .map(|f| {
                if f.contains(var) {
                    reduce_factor(f, var, value)
                } else {
                    Ok(f.clone())
                }
            })
            .collect::<Result<_, _>>()?;
        let vars = self.vars.iter().copied().filter(|x| x.0 != var).collect();
        Ok(SemiringInstance::from_parts_unchecked(vars, factors, self.semiring))
    }
}
