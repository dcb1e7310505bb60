//! Exact computations with extremal elements and inner ideals in Lie algebras
//! over GF(p) (p odd) and the rationals.

mod dual;
pub mod cache;
pub mod catalog;
pub mod chevalley;
pub mod classical;
pub mod error;
pub mod field;
pub mod geometry;
pub mod identities;
pub mod inner_ideals;
pub mod lie;
pub mod linalg;
pub mod notation;
pub mod roots;

pub use catalog::{AlgebraKind, AlgebraSpec, Model};
pub use error::{Error, Result};
pub use field::{Field, FieldScalar};
pub use linalg::{ExactMatrix, Subspace, Vector};
pub use lie::{AlgebraBuilder, Element, ExtremalPoint, JacobiCheck, LieAlgebra, QuotientMap, SandwichStatus};
