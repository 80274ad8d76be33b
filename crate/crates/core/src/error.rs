use thiserror::Error;

use crate::scalar::{Poly, Sym};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScalarError {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("equation is not linear in unknown {unknown}")]
    NonLinear { unknown: Sym },
    #[error("inconsistent system, residual {residual}")]
    Inconsistent { residual: Poly },
    #[error("underdetermined system, free unknowns {free:?}")]
    Underdetermined { free: Vec<Sym> },
    #[error("no constant pivot available, remaining equation {residual}")]
    NonConstantPivot { residual: Poly },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AlgebraError {
    #[error("algebra spec: {location}: {msg}")]
    Spec { location: String, msg: String },
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("no commutator data for the pair ({0}, {1})")]
    MissingBracket(String, String),
    #[error("missing structure constant C_{{{i},{j}}}^{{{k}}}")]
    MissingConstant { i: String, j: String, k: String },
    #[error("p-polynomial requires h(ijk) >= 1, got {0}")]
    ChannelWeight(i64),
    #[error("{0} is not a quasi-primary field reference")]
    NotQuasiPrimary(String),
    #[error("field expression is not weight-homogeneous")]
    Inhomogeneous,
    #[error("state is not weight-homogeneous")]
    InhomogeneousState,
    #[error("cannot parse state: {0}")]
    StateSyntax(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QSeriesError {
    #[error("level {level} is beyond the validity cutoff {cutoff}")]
    BeyondCutoff { level: String, cutoff: String },
    #[error("level {0} is not on the exponent lattice")]
    OffLattice(String),
    #[error("invalid argument: {0}")]
    Argument(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CertificateError {
    #[error("step {step}: {msg}")]
    Step { step: usize, msg: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DerivationError {
    #[error("p = {0} is outside the supported range 2..={1}")]
    UnsupportedP(i64, i64),
    #[error("constants are not numeric: {0}")]
    NotNumeric(String),
    #[error("matching failed: unexpected monomial {0} with coefficient {1}")]
    Matching(String, Poly),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
