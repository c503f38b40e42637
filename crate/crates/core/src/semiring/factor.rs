use super::{SemiringError, Value};
use crate::formula::Var;

/// A table over an ordered scope, row-major with the last scope variable
/// varying fastest. An empty scope holds a single scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    scope: Vec<Var>,
    dims: Vec<usize>,
    table: Vec<Value>,
}

impl Factor {
    pub fn new(scope: Vec<Var>, dims: Vec<usize>, table: Vec<Value>) -> Result<Self, SemiringError> {
        if scope.len() != dims.len() {
            return Err(SemiringError::TableLengthMismatch {
                expected: scope.len(),
                found: dims.len(),
            });
        }
        for (i, v) in scope.iter().enumerate() {
            if scope[..i].contains(v) {
                return Err(SemiringError::DuplicateScopeVariable(*v));
            }
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(SemiringError::EmptyDomain(scope[i]));
        }
        let expected: usize = dims.iter().product();
        if table.len() != expected {
            return Err(SemiringError::TableLengthMismatch {
                expected,
                found: table.len(),
            });
        }
        Ok(Factor { scope, dims, table })
    }

    /// A binary-variable factor.
    pub fn binary(scope: Vec<Var>, table: Vec<Value>) -> Result<Self, SemiringError> {
        let dims = vec![2; scope.len()];
        Factor::new(scope, dims, table)
    }

    pub fn scalar(v: Value) -> Self {
        Factor {
            scope: vec![],
            dims: vec![],
            table: vec![v],
        }
    }

    pub fn scope(&self) -> &[Var] {
        &self.scope
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn table(&self) -> &[Value] {
        &self.table
    }

    pub fn is_scalar(&self) -> bool {
        self.scope.is_empty()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.scope.contains(&v)
    }

    /// Domain size of `v` if it is in scope.
    pub fn dim_of(&self, v: Var) -> Option<usize> {
        self.scope.iter().position(|&x| x == v).map(|i| self.dims[i])
    }

    /// Row index of a scope assignment.
    pub fn index(&self, values: &[usize]) -> usize {
        debug_assert_eq!(values.len(), self.scope.len());
        values.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    pub fn get(&self, values: &[usize]) -> &Value {
        &self.table[self.index(values)]
    }

    /// Entry selected by a full assignment indexed by variable id.
    pub fn eval(&self, assignment: &[usize]) -> &Value {
        let idx = self
            .scope
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&v, &d)| acc * d + assignment[v as usize]);
        &self.table[idx]
    }

    /// Entry selected by a partial assignment indexed by variable id, every
    /// scope variable set.
    pub fn eval_partial(&self, assignment: &[Option<usize>]) -> &Value {
        let idx = self.scope.iter().zip(&self.dims).fold(0, |acc, (&v, &d)| {
            acc * d + assignment[v as usize].expect("scope variable assigned")
        });
        &self.table[idx]
    }

    /// Scalar value of a zero-arity factor.
    pub fn scalar_value(&self) -> Option<&Value> {
        self.is_scalar().then(|| &self.table[0])
    }
}

/// Fixes `var = val` in `f`, dropping `var` from the scope.
pub fn reduce_factor(f: &Factor, var: Var, val: usize) -> Result<Factor, SemiringError> {
    let pos = f
        .scope
        .iter()
        .position(|&v| v == var)
        .ok_or(SemiringError::VarNotInScope(var))?;
    if val >= f.dims[pos] {
        return Err(SemiringError::ValueOutOfDomain { var, value: val });
    }
    let inner: usize = f.dims[pos + 1..].iter().product();
    let outer: usize = f.dims[..pos].iter().product();
    let d = f.dims[pos];
    let mut table = Vec::with_capacity(outer * inner);
    for o in 0..outer {
        let base = (o * d + val) * inner;
        table.extend_from_slice(&f.table[base..base + inner]);
    }
    let mut scope = f.scope.clone();
    scope.remove(pos);
    let mut dims = f.dims.clone();
    dims.remove(pos);
    Ok(Factor { scope, dims, table })
}
