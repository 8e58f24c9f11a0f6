//! Coefficient rings and exact linear algebra.

pub mod echelon;
pub mod field;
pub mod homology;
pub mod matrix;
pub mod module;
pub mod ring;
pub mod snf;

pub use field::{Field, FieldKind, PrimeField, RationalField};
pub use homology::{homology_at, kernel_basis, rank};
pub use matrix::{SparseMatrix, SparseVec};
pub use module::FGModule;
pub use ring::{int, ratio, CoefficientRing, Scalar};
pub use snf::{snf, SnfResult};
