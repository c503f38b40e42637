//! CNF formulas, residual formulas under partial assignments, unit
//! propagation, component splitting and canonical component keys.
//!
//! Values throughout the crate are probabilities: the weight of a variable
//! `x` is `Pr(x = 1)`, and `Pr(x = 0) = 1 - Pr(x = 1)`. Variables without an
//! explicit weight default to `1/2`, so the probability of a formula times
//! `2^n` is its model count.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Variable identifier, `1..=num_vars`.
pub type Var = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("literal references variable {var} outside 1..={num_vars}")]
    VarOutOfRange { var: i64, num_vars: u32 },
    #[error("clause {clause} contains variable {var} in both polarities")]
    Tautology { clause: usize, var: Var },
    #[error("clause {clause} repeats variable {var}")]
    DuplicateVariable { clause: usize, var: Var },
    #[error("weight {weight} for variable {var} is not in [0, 1]")]
    WeightOutOfRange { var: Var, weight: String },
    #[error("variable {var} is already assigned the opposite value")]
    ConflictingAssignment { var: Var },
    #[error("probability {p} times 2^{num_vars} is not an integer")]
    NonIntegralCount { p: String, num_vars: u32 },
}

/// A literal: a variable with a polarity. Ordered by variable id first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Self {
        assert!(var >= 1 && var <= i32::MAX as u32, "variable id out of range");
        let v = var as i32;
        Lit(if positive { v } else { -v })
    }

    pub fn pos(var: Var) -> Self {
        Lit::new(var, true)
    }

    pub fn neg(var: Var) -> Self {
        Lit::new(var, false)
    }

    /// DIMACS-style signed integer; `None` for zero.
    pub fn from_dimacs(x: i32) -> Option<Self> {
        if x == 0 || x == i32::MIN {
            None
        } else {
            Some(Lit(x))
        }
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Self {
        Lit(-self.0)
    }

    /// Whether this literal is true when its variable takes `value`.
    pub fn satisfied_by(self, value: bool) -> bool {
        self.is_positive() == value
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.var(), self.is_positive()).cmp(&(other.var(), other.is_positive()))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A CNF formula with optional per-variable weights.
///
/// Clauses are kept as a multiset (duplicates stay distinct entries) and
/// each clause's literals are sorted by variable id. A clause mentioning a
/// variable twice, in either polarity, is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    weights: BTreeMap<Var, BigRational>,
}

impl Formula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Lit>>) -> Result<Self, FormulaError> {
        let mut checked = Vec::with_capacity(clauses.len());
        for (ci, mut clause) in clauses.into_iter().enumerate() {
            clause.sort();
            for lit in &clause {
                if lit.var() > num_vars {
                    return Err(FormulaError::VarOutOfRange {
                        var: lit.var() as i64,
                        num_vars,
                    });
                }
            }
            for pair in clause.windows(2) {
                if pair[0].var() == pair[1].var() {
                    return Err(if pair[0] == pair[1] {
                        FormulaError::DuplicateVariable {
                            clause: ci,
                            var: pair[0].var(),
                        }
                    } else {
                        FormulaError::Tautology {
                            clause: ci,
                            var: pair[0].var(),
                        }
                    });
                }
            }
            checked.push(clause);
        }
        Ok(Formula {
            num_vars,
            clauses: checked,
            weights: BTreeMap::new(),
        })
    }

    /// Builds a formula from DIMACS-style signed integers.
    pub fn from_dimacs_clauses(num_vars: u32, clauses: &[Vec<i32>]) -> Result<Self, FormulaError> {
        let mut out = Vec::with_capacity(clauses.len());
        for clause in clauses {
            let mut lits = Vec::with_capacity(clause.len());
            for &x in clause {
                let lit = Lit::from_dimacs(x).ok_or(FormulaError::VarOutOfRange {
                    var: x as i64,
                    num_vars,
                })?;
                lits.push(lit);
            }
            out.push(lits);
        }
        Formula::new(num_vars, out)
    }

    /// Sets `Pr(var = 1) = p`.
    pub fn set_weight(&mut self, var: Var, p: BigRational) -> Result<(), FormulaError> {
        if var == 0 || var > self.num_vars {
            return Err(FormulaError::VarOutOfRange {
                var: var as i64,
                num_vars: self.num_vars,
            });
        }
        if p < BigRational::zero() || p > BigRational::one() {
            return Err(FormulaError::WeightOutOfRange {
                var,
                weight: p.to_string(),
            });
        }
        self.weights.insert(var, p);
        Ok(())
    }

    pub fn with_weight(mut self, var: Var, p: BigRational) -> Result<Self, FormulaError> {
        self.set_weight(var, p)?;
        Ok(self)
    }

    pub fn clear_weights(&mut self) {
        self.weights.clear();
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// Explicit weights only; unlisted variables have weight `1/2`.
    pub fn weights(&self) -> &BTreeMap<Var, BigRational> {
        &self.weights
    }

    /// `Pr(var = value)`.
    pub fn weight_of(&self, var: Var, value: bool) -> BigRational {
        let p1 = self
            .weights
            .get(&var)
            .cloned()
            .unwrap_or_else(|| BigRational::new(1.into(), 2.into()));
        if value {
            p1
        } else {
            BigRational::one() - p1
        }
    }

    pub fn is_uniform(&self) -> bool {
        let half = BigRational::new(1.into(), 2.into());
        self.weights.values().all(|w| *w == half)
    }

    /// Number of variables without an explicit weight.
    pub fn num_unweighted(&self) -> u32 {
        self.num_vars - self.weights.len() as u32
    }

    /// The whole formula as a residual with no variables assigned.
    pub fn residual(&self) -> Residual {
        Residual {
            clauses: self
                .clauses
                .iter()
                .enumerate()
                .map(|(index, lits)| ResidualClause {
                    index,
                    lits: lits.clone(),
                })
                .collect(),
        }
    }
}

/// A partial assignment of variables to `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(num_vars: u32) -> Self {
        Assignment {
            values: vec![None; num_vars as usize + 1],
        }
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    /// Assigns `var`. Re-assigning the same value is a no-op; the opposite
    /// value is an error.
    pub fn assign(&mut self, var: Var, value: bool) -> Result<(), FormulaError> {
        if var == 0 || var as usize >= self.values.len() {
            return Err(FormulaError::VarOutOfRange {
                var: var as i64,
                num_vars: self.num_vars(),
            });
        }
        match self.values[var as usize] {
            Some(v) if v != value => Err(FormulaError::ConflictingAssignment { var }),
            _ => {
                self.values[var as usize] = Some(value);
                Ok(())
            }
        }
    }

    /// Makes `lit` true.
    pub fn assign_lit(&mut self, lit: Lit) -> Result<(), FormulaError> {
        self.assign(lit.var(), lit.is_positive())
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Assigned `(var, value)` pairs in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, val)| val.map(|b| (v as Var, b)))
    }
}

/// One clause of a residual formula: its index in the original formula and
/// the literals that are still unassigned.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidualClause {
    pub index: usize,
    pub lits: Vec<Lit>,
}

/// A formula reduced by a partial assignment. Clauses stay in ascending
/// order of original index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Residual {
    clauses: Vec<ResidualClause>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObviousStatus {
    /// No clauses remain; value 1.
    EmptyFormula,
    /// Some clause has no literals left; value 0.
    HasEmptyClause,
    NotObvious,
}

impl Residual {
    pub fn from_clauses(mut clauses: Vec<ResidualClause>) -> Self {
        clauses.sort_by_key(|c| c.index);
        Residual { clauses }
    }

    pub fn clauses(&self) -> &[ResidualClause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Sorted, deduplicated variables occurring in the residual clauses.
    pub fn vars(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .clauses
            .iter()
            .flat_map(|c| c.lits.iter().map(|l| l.var()))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn status(&self) -> ObviousStatus {
        if self.clauses.is_empty() {
            ObviousStatus::EmptyFormula
        } else if self.clauses.iter().any(|c| c.lits.is_empty()) {
            ObviousStatus::HasEmptyClause
        } else {
            ObviousStatus::NotObvious
        }
    }

    /// Reduces by making `lit` true.
    pub fn condition(&self, lit: Lit) -> Residual {
        let var = lit.var();
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            match c.lits.iter().position(|l| l.var() == var) {
                None => clauses.push(c.clone()),
                Some(pos) if c.lits[pos] == lit => {}
                Some(pos) => {
                    let mut lits = c.lits.clone();
                    lits.remove(pos);
                    clauses.push(ResidualClause { index: c.index, lits });
                }
            }
        }
        Residual { clauses }
    }

    /// Reduces by every assignment in `a`.
    pub fn restrict(&self, a: &Assignment) -> Residual {
        let mut clauses = Vec::with_capacity(self.clauses.len());
        'outer: for c in &self.clauses {
            let mut lits = Vec::with_capacity(c.lits.len());
            for &l in &c.lits {
                match a.get(l.var()) {
                    Some(v) if l.satisfied_by(v) => continue 'outer,
                    Some(_) => {}
                    None => lits.push(l),
                }
            }
            clauses.push(ResidualClause { index: c.index, lits });
        }
        Residual { clauses }
    }

    /// Canonical key of the whole residual formula.
    pub fn key(&self) -> Vec<u8> {
        encode_key(&self.clauses)
    }

    /// Number of occurrences of each variable.
    pub fn occurrences(&self) -> BTreeMap<Var, usize> {
        let mut occ = BTreeMap::new();
        for c in &self.clauses {
            for l in &c.lits {
                *occ.entry(l.var()).or_insert(0) += 1;
            }
        }
        occ
    }
}

/// `f` reduced by `a`: satisfied clauses dropped, falsified literals removed.
pub fn reduce(f: &Formula, a: &Assignment) -> Residual {
    f.residual().restrict(a)
}

pub fn is_obvious(r: &Residual) -> ObviousStatus {
    r.status()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagationStatus {
    Ok,
    Conflict,
}

/// Outcome of unit propagation on a residual formula.
#[derive(Clone, Debug)]
pub struct Propagated {
    pub residual: Residual,
    /// Literals made true by propagation, in the order they were forced.
    pub forced: Vec<Lit>,
    pub status: PropagationStatus,
}

/// Unit propagation to fixpoint. All unit clauses present in a round are
/// applied together; complementary units or an empty clause is a conflict.
pub fn propagate(r: &Residual) -> Propagated {
    let mut residual = r.clone();
    let mut forced = Vec::new();
    loop {
        if residual.status() == ObviousStatus::HasEmptyClause {
            return Propagated {
                residual,
                forced,
                status: PropagationStatus::Conflict,
            };
        }
        let mut units: HashMap<Var, bool> = HashMap::new();
        let mut round = Vec::new();
        for c in residual.clauses() {
            if let [l] = c.lits[..] {
                match units.get(&l.var()) {
                    Some(&v) if v != l.is_positive() => {
                        // Complementary units: force the first, the second
                        // clause becomes empty.
                        forced.extend(round);
                        forced.push(Lit::new(l.var(), v));
                        let residual = residual.condition(Lit::new(l.var(), v));
                        return Propagated {
                            residual,
                            forced,
                            status: PropagationStatus::Conflict,
                        };
                    }
                    Some(_) => {}
                    None => {
                        units.insert(l.var(), l.is_positive());
                        round.push(l);
                    }
                }
            }
        }
        if round.is_empty() {
            return Propagated {
                residual,
                forced,
                status: PropagationStatus::Ok,
            };
        }
        residual = condition_all(&residual, &units);
        forced.extend(round);
    }
}

fn condition_all(r: &Residual, values: &HashMap<Var, bool>) -> Residual {
    let mut clauses = Vec::with_capacity(r.clauses.len());
    'outer: for c in &r.clauses {
        let mut lits = Vec::with_capacity(c.lits.len());
        for &l in &c.lits {
            match values.get(&l.var()) {
                Some(&v) if l.satisfied_by(v) => continue 'outer,
                Some(_) => {}
                None => lits.push(l),
            }
        }
        clauses.push(ResidualClause { index: c.index, lits });
    }
    Residual { clauses }
}

/// Reduces `r` by `a`, then propagates units. The returned assignment
/// extends `a` with the forced values only.
pub fn unit_propagate(r: &Residual, a: &Assignment) -> (Assignment, PropagationStatus) {
    let p = propagate(&r.restrict(a));
    let mut out = a.clone();
    for lit in &p.forced {
        // Forced literals never touch variables assigned in `a`: those are
        // gone from the restricted residual.
        out.assign_lit(*lit)
            .expect("forced literal is consistent with the input assignment");
    }
    (out, p.status)
}

/// A connected set of residual clauses: the unit of caching.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    residual: Residual,
    vars: Vec<Var>,
    key: Vec<u8>,
}

impl Component {
    pub fn new(residual: Residual) -> Self {
        let vars = residual.vars();
        let key = residual.key();
        Component { residual, vars, key }
    }

    pub fn clauses(&self) -> &[ResidualClause] {
        self.residual.clauses()
    }

    pub fn residual(&self) -> &Residual {
        &self.residual
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.vars.binary_search(&var).is_ok()
    }
}

/// Splits `r` into variable-disjoint components, ordered by smallest
/// variable id. Callers must rule out empty clauses first.
pub fn to_components(r: &Residual) -> Vec<Component> {
    let vars = r.vars();
    if vars.is_empty() {
        return Vec::new();
    }
    let index: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(vars.len());
    for c in r.clauses() {
        let mut it = c.lits.iter();
        if let Some(first) = it.next() {
            let a = index[&first.var()];
            for l in it {
                uf.union(a, index[&l.var()]);
            }
        }
    }
    // Roots in order of first (smallest) variable give the output order.
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut groups: Vec<Vec<ResidualClause>> = Vec::new();
    for v in &vars {
        let root = uf.find(index[v]);
        slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
    }
    for c in r.clauses() {
        debug_assert!(!c.lits.is_empty(), "to_components called with an empty clause");
        let Some(first) = c.lits.first() else { continue };
        let g = slot[&uf.find(index[&first.var()])];
        groups[g].push(c.clone());
    }
    groups
        .into_iter()
        .map(|clauses| Component::new(Residual { clauses }))
        .collect()
}

pub fn canonical_key(c: &Component) -> Vec<u8> {
    encode_key(c.clauses())
}

/// `index:lit,lit;index:lit;...` over clauses sorted by original index.
/// Original indices are unique within a residual, so sorting by index is
/// the lexicographic order of `(index, literals)`.
fn encode_key(clauses: &[ResidualClause]) -> Vec<u8> {
    use std::io::Write;
    let mut out = Vec::with_capacity(clauses.len() * 12);
    debug_assert!(clauses.windows(2).all(|w| w[0].index < w[1].index));
    for c in clauses {
        write!(out, "{}:", c.index).unwrap();
        for (i, l) in c.lits.iter().enumerate() {
            if i > 0 {
                out.push(b',');
            }
            write!(out, "{}", l.to_dimacs()).unwrap();
        }
        out.push(b';');
    }
    out
}

/// `p * 2^num_vars` as an integer.
pub fn probability_to_count(p: &BigRational, num_vars: u32) -> Result<BigInt, FormulaError> {
    let scaled = p * BigRational::from_integer(BigInt::one() << num_vars as usize);
    if scaled.is_integer() {
        Ok(scaled.to_integer())
    } else {
        Err(FormulaError::NonIntegralCount {
            p: p.to_string(),
            num_vars,
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u32, clauses: &[&[i32]]) -> Formula {
        let cs: Vec<Vec<i32>> = clauses.iter().map(|c| c.to_vec()).collect();
        Formula::from_dimacs_clauses(n, &cs).unwrap()
    }

    fn lits(r: &Residual) -> Vec<Vec<i32>> {
        r.clauses()
            .iter()
            .map(|c| c.lits.iter().map(|l| l.to_dimacs()).collect())
            .collect()
    }

    // w=1, x=2, y=3, z=4
    fn wxyz() -> Formula {
        f(4, &[&[1, 2], &[3, 4]])
    }

    fn ladder() -> Formula {
        // a b c d e f x = 1..7
        f(
            7,
            &[
                &[1, 2, 3, 7],
                &[-1, 2, 3],
                &[1, -2, 3],
                &[4, 5, 6, 7],
                &[-4, 5, 6],
                &[4, -5, 6],
            ],
        )
    }

    #[test]
    fn construction_rejects_tautology_and_duplicates() {
        assert!(matches!(
            Formula::from_dimacs_clauses(2, &[vec![1, -1]]),
            Err(FormulaError::Tautology { .. })
        ));
        assert!(matches!(
            Formula::from_dimacs_clauses(2, &[vec![2, 2]]),
            Err(FormulaError::DuplicateVariable { .. })
        ));
        assert!(matches!(
            Formula::from_dimacs_clauses(2, &[vec![3]]),
            Err(FormulaError::VarOutOfRange { .. })
        ));
        let g = f(3, &[&[3, -1, 2]]);
        assert_eq!(lits(&g.residual()), vec![vec![-1, 2, 3]]);
    }

    #[test]
    fn reduce_examples() {
        let g = wxyz();
        let mut a = Assignment::new(4);
        a.assign(1, false).unwrap();
        assert_eq!(lits(&reduce(&g, &a)), vec![vec![2], vec![3, 4]]);

        assert_eq!(reduce(&g, &Assignment::new(4)), g.residual());

        let h = f(2, &[&[1, 2]]);
        let mut a = Assignment::new(2);
        a.assign(1, false).unwrap();
        a.assign(2, false).unwrap();
        let r = reduce(&h, &a);
        assert_eq!(r.status(), ObviousStatus::HasEmptyClause);
    }

    #[test]
    fn assignment_conflict_is_error() {
        let mut a = Assignment::new(3);
        a.assign(2, true).unwrap();
        a.assign(2, true).unwrap();
        assert_eq!(a.assign(2, false), Err(FormulaError::ConflictingAssignment { var: 2 }));
        assert!(a.assign(4, true).is_err());
    }

    #[test]
    fn obvious_status() {
        assert_eq!(is_obvious(&Residual::default()), ObviousStatus::EmptyFormula);
        let empty_clause = Residual::from_clauses(vec![ResidualClause { index: 0, lits: vec![] }]);
        assert_eq!(is_obvious(&empty_clause), ObviousStatus::HasEmptyClause);
        let yz = f(4, &[&[3, 4]]).residual();
        assert_eq!(is_obvious(&yz), ObviousStatus::NotObvious);
    }

    #[test]
    fn unit_propagate_examples() {
        let g = f(2, &[&[1, 2]]);
        let mut a = Assignment::new(2);
        a.assign(1, false).unwrap();
        let (out, st) = unit_propagate(&g.residual(), &a);
        assert_eq!(st, PropagationStatus::Ok);
        assert_eq!(out.iter().collect::<Vec<_>>(), vec![(1, false), (2, true)]);

        let contra = f(1, &[&[1], &[-1]]);
        let (_, st) = unit_propagate(&contra.residual(), &Assignment::new(1));
        assert_eq!(st, PropagationStatus::Conflict);

        let yz = f(4, &[&[3, 4]]);
        let (out, st) = unit_propagate(&yz.residual(), &Assignment::new(4));
        assert_eq!(st, PropagationStatus::Ok);
        assert!(out.is_empty());
    }

    #[test]
    fn propagation_chains() {
        // (x1) (¬x1 ∨ x2) (¬x2 ∨ x3)
        let g = f(3, &[&[1], &[-1, 2], &[-2, 3]]);
        let p = propagate(&g.residual());
        assert_eq!(p.status, PropagationStatus::Ok);
        assert_eq!(p.forced, vec![Lit::pos(1), Lit::pos(2), Lit::pos(3)]);
        assert!(p.residual.is_empty());
    }

    #[test]
    fn components_of_disjoint_clauses() {
        let comps = to_components(&wxyz().residual());
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vars(), &[1, 2]);
        assert_eq!(comps[1].vars(), &[3, 4]);

        let single = to_components(&f(3, &[&[1, 2, 3]]).residual());
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn ladder_splits_after_x_false() {
        let g = ladder();
        let r = g.residual().condition(Lit::neg(7));
        let p = propagate(&r);
        assert_eq!(p.status, PropagationStatus::Ok);
        let comps = to_components(&p.residual);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vars(), &[1, 2, 3]);
        assert_eq!(comps[1].vars(), &[4, 5, 6]);
        assert_eq!(comps[0].clauses().len(), 3);
    }

    #[test]
    fn key_identical_across_paths() {
        let g = wxyz();
        let via_w0_x1 = g.residual().condition(Lit::neg(1)).condition(Lit::pos(2));
        let via_w1 = g.residual().condition(Lit::pos(1));
        let a = to_components(&via_w0_x1);
        let b = to_components(&via_w1);
        assert_eq!(a.len(), 1);
        assert_eq!(canonical_key(&a[0]), canonical_key(&b[0]));
        assert_eq!(a[0].key(), b[0].key());

        let other = f(4, &[&[3, -4]]);
        let c = to_components(&other.residual());
        assert_ne!(a[0].key(), c[0].key());
    }

    #[test]
    fn probability_to_count_examples() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(probability_to_count(&r(9, 16), 4).unwrap(), 9.into());
        assert_eq!(probability_to_count(&r(0, 1), 5).unwrap(), 0.into());
        assert_eq!(probability_to_count(&r(61, 128), 7).unwrap(), 61.into());
        assert!(matches!(
            probability_to_count(&r(1, 3), 4),
            Err(FormulaError::NonIntegralCount { .. })
        ));
    }

    #[test]
    fn weights_default_to_half() {
        let g = f(2, &[&[1]])
            .with_weight(1, BigRational::new(1.into(), 3.into()))
            .unwrap();
        assert_eq!(g.weight_of(1, true), BigRational::new(1.into(), 3.into()));
        assert_eq!(g.weight_of(1, false), BigRational::new(2.into(), 3.into()));
        assert_eq!(g.weight_of(2, false), BigRational::new(1.into(), 2.into()));
        assert!(!g.is_uniform());
        assert_eq!(g.num_unweighted(), 1);
        assert!(g.clone().with_weight(2, BigRational::new(3.into(), 2.into())).is_err());
    }
}
