use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{early_zero_cutoff, Factor, SemiringError, SemiringInstance, Value};
use crate::dpll::{CacheStore, OrderPolicy, OrderVariant, SearchStats};
use crate::formula::Var;

/// Default limit on the assignments enumerated by brute force.
pub const BRUTE_FORCE_CAP: u128 = 1 << 22;

/// Evaluates the nested sum of products literally.
pub fn brute_force_sumprod(inst: &SemiringInstance) -> Result<Value, SemiringError> {
    brute_force_sumprod_capped(inst, BRUTE_FORCE_CAP)
}

pub fn brute_force_sumprod_capped(inst: &SemiringInstance, cap: u128) -> Result<Value, SemiringError> {
    let states = inst.state_count();
    if states > cap {
        return Err(SemiringError::InstanceTooLarge { states, cap });
    }
    let s = inst.semiring();
    let max_var = inst.vars().last().map_or(0, |v| v.0) as usize;
    let mut assignment = vec![0usize; max_var + 1];
    let mut total = s.zero();
    loop {
        let mut prod = s.one();
        for f in inst.factors() {
            prod = s.mul(&prod, f.eval(&assignment));
            if early_zero_cutoff(&prod, s) {
                break;
            }
        }
        total = s.add(&total, &prod);
        // advance the mixed-radix counter, last variable fastest
        let mut i = inst.vars().len();
        loop {
            if i == 0 {
                return Ok(total);
            }
            i -= 1;
            let (v, d) = inst.vars()[i];
            assignment[v as usize] += 1;
            if assignment[v as usize] < d {
                break;
            }
            assignment[v as usize] = 0;
        }
    }
}

/// An instance split into independent parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Product of the zero-arity factors and of `one ⊕ … ⊕ one` for every
    /// variable in no factor.
    pub scalar: Value,
    /// Parts connected through shared variables, ordered by smallest
    /// variable.
    pub parts: Vec<SemiringInstance>,
}

impl Components {
    /// Value of the original instance given the value of each part.
    pub fn combine(&self, values: &[Value]) -> Value {
        let s = self.parts.first().map(|p| p.semiring());
        values.iter().fold(self.scalar.clone(), |acc, v| match s {
            Some(s) => s.mul(&acc, v),
            None => acc,
        })
    }
}

/// Splits `inst` into connected parts of its primal graph.
pub fn instance_to_components(inst: &SemiringInstance) -> Components {
    let s = inst.semiring();
    let vars = inst.vars();
    let index: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(i, v)| (v.0, i)).collect();
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut used = vec![false; vars.len()];
    let mut scalar = s.one();
    for f in inst.factors() {
        match f.scalar_value() {
            Some(v) => scalar = s.mul(&scalar, v),
            None => {
                let first = index[&f.scope()[0]];
                for v in f.scope() {
                    let i = index[v];
                    used[i] = true;
                    let (a, b) = (find(&mut parent, first), find(&mut parent, i));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    for (i, &(_, d)) in vars.iter().enumerate() {
        if !used[i] {
            scalar = s.mul(&scalar, &s.one_sum(d));
        }
    }
    type Group = (Vec<(Var, usize)>, Vec<Factor>);
    let mut groups: BTreeMap<usize, Group> = BTreeMap::new();
    for (i, &var) in vars.iter().enumerate() {
        if used[i] {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().0.push(var);
        }
    }
    for f in inst.factors() {
        if !f.is_scalar() {
            let r = find(&mut parent, index[&f.scope()[0]]);
            groups.get_mut(&r).expect("root has a group").1.push(f.clone());
        }
    }
    let parts = groups
        .into_values()
        .map(|(vs, fs)| SemiringInstance::from_parts_unchecked(vs, fs, s))
        .collect();
    Components { scalar, parts }
}

fn part_key(inst: &SemiringInstance) -> Vec<u8> {
    let mut rows: Vec<String> = inst
        .factors()
        .iter()
        .map(|f| {
            let mut s = String::new();
            for (v, d) in f.scope().iter().zip(f.dims()) {
                s.push_str(&format!("{v}/{d},"));
            }
            s.push(':');
            for x in f.table() {
                s.push_str(&format!("{x},"));
            }
            s
        })
        .collect();
    rows.sort();
    rows.join(";").into_bytes()
}

struct Search {
    policy: OrderVariant,
    rng: Option<ChaCha8Rng>,
    positions: BTreeMap<Var, usize>,
    stats: SearchStats,
    cache: CacheStore<Value>,
}

impl Search {
    fn choose(&mut self, part: &SemiringInstance) -> Var {
        let vars = part.var_ids();
        match &self.policy {
            OrderVariant::DynamicMaxOccurrence => {
                let mut occ: BTreeMap<Var, usize> = BTreeMap::new();
                for f in part.factors() {
                    for &v in f.scope() {
                        *occ.entry(v).or_insert(0) += 1;
                    }
                }
                // ascending iteration keeps the smallest id on ties
                occ.into_iter()
                    .fold((0, 0), |best, (v, n)| if n > best.1 { (v, n) } else { best })
                    .0
            }
            OrderVariant::StaticList(_) => *vars
                .iter()
                .min_by_key(|v| (self.positions.get(v).copied().unwrap_or(usize::MAX), **v))
                .expect("part has variables"),
            OrderVariant::Random(_) => {
                let rng = self.rng.as_mut().expect("seeded");
                vars[rng.gen_range(0..vars.len())]
            }
        }
    }

    fn solve_parts(&mut self, c: &Components) -> Result<Value, SemiringError> {
        let s = c.parts.first().map_or(super::Semiring::SumProduct, |p| p.semiring());
        let mut acc = c.scalar.clone();
        self.stats.components_created += c.parts.len() as u64;
        for p in &c.parts {
            if early_zero_cutoff(&acc, s) {
                break;
            }
            let v = self.solve(p)?;
            acc = s.mul(&acc, &v);
        }
        Ok(acc)
    }

    fn solve(&mut self, part: &SemiringInstance) -> Result<Value, SemiringError> {
        let key = part_key(part);
        if let Some(v) = self.cache.lookup(&key) {
            return Ok(v.clone());
        }
        let s = part.semiring();
        let x = self.choose(part);
        self.stats.decisions += 1;
        let d = part.domain(x).expect("chosen variable is in the part");
        let mut total = s.zero();
        for value in 0..d {
            let split = instance_to_components(&part.condition(x, value)?);
            if early_zero_cutoff(&split.scalar, s) {
                self.stats.conflicts += 1;
                continue;
            }
            let v = self.solve_parts(&split)?;
            total = s.add(&total, &v);
        }
        self.cache.insert(key, total.clone());
        Ok(total)
    }
}

/// Component-caching search for any semiring. Each value of the branch
/// variable contributes the product of the factors it fully instantiates
/// times the values of the resulting parts. The unit-propagation flag of
/// `policy` has no effect here.
pub fn sumprod_dpll_cache(
    inst: &SemiringInstance,
    policy: &OrderPolicy,
) -> Result<(Value, SearchStats), SemiringError> {
    let mut search = Search {
        policy: policy.variant.clone(),
        rng: match policy.variant {
            OrderVariant::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        },
        positions: match &policy.variant {
            OrderVariant::StaticList(list) => list.iter().enumerate().map(|(i, &v)| (v, i)).collect(),
            _ => BTreeMap::new(),
        },
        stats: SearchStats::default(),
        cache: CacheStore::new(),
    };
    let split = instance_to_components(inst);
    let value = if split.parts.is_empty() {
        split.scalar.clone()
    } else {
        search.solve_parts(&split)?
    };
    let mut stats = search.stats;
    stats.cache_hits = search.cache.hits();
    stats.cache_stores = search.cache.stores();
    stats.cache_peak = search.cache.peak() as u64;
    Ok((value, stats))
}
