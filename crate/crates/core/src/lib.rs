//! Exact model counting and sum-of-products solving.
//!
//! The crate provides DPLL-style counters with formula and component
//! caching, the classic reference algorithms (variable elimination,
//! recursive conditioning, AND/OR search) over commutative semirings, the
//! width toolkit relating elimination orders, tree and branch
//! decompositions and pseudo trees, and generators for benchmark formulas.

pub mod cli;
pub mod decomposition;
pub mod dpll;
pub mod engine;
pub mod formula;
pub mod generators;
pub mod io;
pub mod reference;
pub mod semiring;
