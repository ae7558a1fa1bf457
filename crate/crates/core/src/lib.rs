//! Exact-arithmetic toolkit for ordered algebraic branching programs:
//! the hitting-set generator and black-box identity test for read-`r`
//! `π`-ordered ABPs, the obliviation and decomposition transforms, rank-based
//! read lower bounds, and builders for the standard polynomial families.

pub mod abp;
pub mod corpus;
pub mod error;
pub mod families;
pub mod field;
pub mod generator;
pub mod linalg;
pub mod normalize;
pub mod par;
pub mod pit;
pub mod poly;

pub use abp::{Abp, AbpBuilder, AbpStats, Edge, Label, Permutation};
pub use error::{Error, Result};
pub use field::{enumerate_points, find_irreducible, Elem, Field, FieldConfig};
pub use par::Exec;
pub use poly::{SparsePoly, VarSpace, DEFAULT_TERM_BUDGET};
