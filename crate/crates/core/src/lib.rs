//! Exact computations for triplet W-algebras: mode commutators, PBW normal
//! ordering, characters, C2 membership certificates and the singular-vector
//! coefficient derivation.

pub mod algebra;
pub mod c2;
pub mod derivation;
pub mod error;
pub mod qseries;
pub mod scalar;

pub use algebra::{load_spec, AlgebraSpec, Engine, FieldExpr, FieldId, Mode, State};
pub use error::{AlgebraError, CertificateError, DerivationError, QSeriesError, ScalarError};
pub use scalar::{Poly, Rat, Sym};
