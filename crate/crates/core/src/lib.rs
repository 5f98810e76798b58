//! Hierarchical identifiable polynomial models for experimental designs.
//!
//! A design is a finite set of distinct points in `Q^r`. A model is a set of
//! monomials; it is identifiable when its design matrix has full column rank
//! and hierarchical when it is closed under division. Saturated models of
//! this kind (one term per point) form the design's statistical fan.
//!
//! Everything is exact: rank decisions use fraction-free elimination over
//! arbitrary precision integers.

pub mod catalog;
pub mod conditions;
pub mod design;
pub mod error;
pub mod exact;
pub mod fan;
pub mod groebner;
pub mod monomial;
pub mod search;

pub use design::{load_design, Design, Model, ModelReport};
pub use error::{Error, Result};
pub use exact::{Matrix, Rational};
pub use fan::{FanLimits, FanResult, LeafRecord, PriorityPolicy, Provenance};
pub use monomial::{Monomial, MonomialOrder, OrderKind};

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
