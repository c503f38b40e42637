//! DPLL-style satisfiability and counting: plain search, whole-formula
//! caching and component caching (with an optional space-saving mode).

mod counters;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Component, Residual, Var};

pub use counters::{
    count_component_cache, count_dpll, count_simple_cache, run_component_cache, run_simple_cache, sat_dpll,
    AuditReport, CountOutcome,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpllError {
    #[error("no component has a variable to branch on")]
    NoBranchableVariable,
    #[error("static order is not a permutation of 1..={num_vars}: {detail}")]
    InvalidStaticOrder { num_vars: u32, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderVariant {
    /// Most occurrences across the open components, ties to the smallest id.
    DynamicMaxOccurrence,
    /// First listed variable that still occurs in an open component.
    StaticList(Vec<Var>),
    /// Uniform pick among the open variables from a seeded stream.
    Random(u64),
}

/// How the next branch variable is chosen, and whether unit clauses are
/// propagated after each assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPolicy {
    pub variant: OrderVariant,
    pub unit_propagation: bool,
}

impl OrderPolicy {
    pub fn dynamic() -> Self {
        OrderPolicy {
            variant: OrderVariant::DynamicMaxOccurrence,
            unit_propagation: true,
        }
    }

    pub fn static_list(order: Vec<Var>) -> Self {
        OrderPolicy {
            variant: OrderVariant::StaticList(order),
            unit_propagation: true,
        }
    }

    pub fn random(seed: u64) -> Self {
        OrderPolicy {
            variant: OrderVariant::Random(seed),
            unit_propagation: true,
        }
    }

    pub fn with_unit_propagation(mut self, on: bool) -> Self {
        self.unit_propagation = on;
        self
    }

    /// Short text form used in run reports.
    pub fn describe(&self) -> String {
        let base = match &self.variant {
            OrderVariant::DynamicMaxOccurrence => "dynamic".to_string(),
            OrderVariant::StaticList(v) => format!("static:{}", v.len()),
            OrderVariant::Random(s) => format!("random:{s}"),
        };
        if self.unit_propagation {
            base
        } else {
            format!("{base},no-up")
        }
    }
}

impl Default for OrderPolicy {
    fn default() -> Self {
        OrderPolicy::dynamic()
    }
}

/// Completes `prefix` into a permutation of `1..=num_vars` by appending the
/// missing variables in ascending order. Repeats and out-of-range ids in
/// `prefix` are dropped.
pub fn complete_static_order(prefix: &[Var], num_vars: u32) -> Vec<Var> {
    let mut seen = vec![false; num_vars as usize + 1];
    let mut out = Vec::with_capacity(num_vars as usize);
    for &v in prefix {
        if v >= 1 && v <= num_vars && !seen[v as usize] {
            seen[v as usize] = true;
            out.push(v);
        }
    }
    out.extend((1..=num_vars).filter(|&v| !seen[v as usize]));
    out
}

/// Per-run counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Branch variables chosen.
    pub decisions: u64,
    /// Literals forced by unit propagation.
    pub up_propagations: u64,
    pub cache_hits: u64,
    pub cache_stores: u64,
    /// Largest number of simultaneous cache entries.
    pub cache_peak: u64,
    /// Components produced by splitting.
    pub components_created: u64,
    /// Branches that ended in an empty clause.
    pub conflicts: u64,
}

/// Cache keyed by canonical byte strings.
#[derive(Clone, Debug)]
pub struct CacheStore<V> {
    map: HashMap<Vec<u8>, V>,
    hits: u64,
    misses: u64,
    stores: u64,
    removals: u64,
    peak: usize,
}

impl<V> Default for CacheStore<V> {
    fn default() -> Self {
        CacheStore {
            map: HashMap::new(),
            hits: 0,
            misses: 0,
            stores: 0,
            removals: 0,
            peak: 0,
        }
    }
}

impl<V: Clone + PartialEq + std::fmt::Debug> CacheStore<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counted lookup.
    pub fn lookup(&mut self, key: &[u8]) -> Option<&V> {
        match self.map.get(key) {
            Some(v) => {
                self.hits += 1;
                Some(v)
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    /// Uncounted lookup.
    pub fn peek(&self, key: &[u8]) -> Option<&V> {
        self.map.get(key)
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        self.map.contains_key(key)
    }

    pub fn insert(&mut self, key: Vec<u8>, value: V) {
        if let Some(old) = self.map.get(&key) {
            debug_assert_eq!(old, &value, "cached value changed");
            return;
        }
        self.map.insert(key, value);
        self.stores += 1;
        self.peak = self.peak.max(self.map.len());
    }

    pub fn remove(&mut self, key: &[u8]) -> Option<V> {
        let out = self.map.remove(key);
        if out.is_some() {
            self.removals += 1;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.map.keys()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn stores(&self) -> u64 {
        self.stores
    }

    pub fn removals(&self) -> u64 {
        self.removals
    }

    pub fn peak(&self) -> usize {
        self.peak
    }
}

/// Stateful variable selection for one run.
pub(crate) struct Chooser {
    variant: ChooserKind,
}

enum ChooserKind {
    Dynamic,
    Static(Vec<usize>),
    Random(Box<ChaCha8Rng>),
}

impl Chooser {
    pub(crate) fn new(policy: &OrderPolicy, num_vars: u32) -> Result<Self, DpllError> {
        let variant = match &policy.variant {
            OrderVariant::DynamicMaxOccurrence => ChooserKind::Dynamic,
            OrderVariant::Random(seed) => ChooserKind::Random(Box::new(ChaCha8Rng::seed_from_u64(*seed))),
            OrderVariant::StaticList(list) => {
                let mut pos = vec![usize::MAX; num_vars as usize + 1];
                for (i, &v) in list.iter().enumerate() {
                    if v == 0 || v > num_vars {
                        return Err(DpllError::InvalidStaticOrder {
                            num_vars,
                            detail: format!("variable {v} out of range"),
                        });
                    }
                    if pos[v as usize] != usize::MAX {
                        return Err(DpllError::InvalidStaticOrder {
                            num_vars,
                            detail: format!("variable {v} listed twice"),
                        });
                    }
                    pos[v as usize] = i;
                }
                if list.len() != num_vars as usize {
                    return Err(DpllError::InvalidStaticOrder {
                        num_vars,
                        detail: format!("{} variables listed", list.len()),
                    });
                }
                ChooserKind::Static(pos)
            }
        };
        Ok(Chooser { variant })
    }

    /// A variable occurring in one of `parts`, with the index of that part.
    pub(crate) fn choose(&mut self, parts: &[&Residual]) -> Result<(Var, usize), DpllError> {
        let owner = |v: Var| {
            parts
                .iter()
                .position(|r| r.clauses().iter().any(|c| c.lits.iter().any(|l| l.var() == v)))
                .expect("chosen variable occurs in some part")
        };
        let var = match &mut self.variant {
            ChooserKind::Dynamic => {
                let mut occ: HashMap<Var, usize> = HashMap::new();
                for r in parts {
                    for c in r.clauses() {
                        for l in &c.lits {
                            *occ.entry(l.var()).or_insert(0) += 1;
                        }
                    }
                }
                occ.into_iter()
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                    .map(|(v, _)| v)
            }
            ChooserKind::Static(pos) => parts
                .iter()
                .flat_map(|r| r.clauses().iter().flat_map(|c| c.lits.iter().map(|l| l.var())))
                .min_by_key(|&v| pos[v as usize]),
            ChooserKind::Random(rng) => {
                let mut vars: Vec<Var> = parts.iter().flat_map(|r| r.vars()).collect();
                vars.sort_unstable();
                vars.dedup();
                if vars.is_empty() {
                    None
                } else {
                    Some(vars[rng.gen_range(0..vars.len())])
                }
            }
        };
        let var = var.ok_or(DpllError::NoBranchableVariable)?;
        Ok((var, owner(var)))
    }
}

/// Picks a branch variable among `components` under `policy`, returning it
/// with the index of the component it occurs in. A `Random` policy starts
/// from a fresh stream on every call.
pub fn choose_variable(components: &[Component], policy: &OrderPolicy) -> Result<(Var, usize), DpllError> {
    let num_vars = match &policy.variant {
        OrderVariant::StaticList(list) => list.len() as u32,
        _ => components
            .iter()
            .flat_map(|c| c.vars().iter().copied())
            .max()
            .unwrap_or(0),
    };
    let mut chooser = Chooser::new(policy, num_vars)?;
    let parts: Vec<&Residual> = components.iter().map(|c| c.residual()).collect();
    chooser.choose(&parts)
}
