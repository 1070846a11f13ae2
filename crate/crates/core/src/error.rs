use thiserror::Error;

use crate::covering::{CurveId, MarkedId};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MatrixError {
    #[error("empty input")]
    Empty,
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix has a negative entry at ({0}, {1})")]
    Negative(usize, usize),
    #[error("spectral radius did not converge after {iterations} iterations; enclosure [{lower}, {upper}]")]
    NoConvergence { iterations: usize, lower: f64, upper: f64 },
    #[error("matrix is reducible; use the Frobenius normal form to split it into irreducible blocks")]
    Reducible,
    #[error("spectral radius {lambda} must be below 1")]
    RadiusNotBelowOne { lambda: f64 },
    #[error("no power up to {cap} has norm below 1/2")]
    PowerCapExceeded { cap: usize },
    #[error("family member {index}: {reason}")]
    FamilyMember { index: usize, reason: String },
    #[error("multicurve is not f-stable: {0} has a lift outside it")]
    NotFStable(CurveId),
    #[error("exhaustive enumeration only supported for d <= 2 and p <= 5 (got d = {degree}, p = {p})")]
    EnumerationTooLarge { degree: u32, p: usize },
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecError {
    #[error("unknown curve {0}")]
    UnknownCurve(CurveId),
    #[error("curve {0} appears twice in the multicurve")]
    DuplicateCurve(CurveId),
    #[error("curve {0} has no pullback entry")]
    MissingPullback(CurveId),
    #[error("curve {curve}: preimage component has degree {degree}")]
    BadComponentDegree { curve: CurveId, degree: u32 },
    #[error("curve {curve}: preimage degrees sum to {sum}, expected {degree}")]
    DegreeSum { curve: CurveId, sum: u32, degree: u32 },
    #[error("pullback closure of {from} needs {missing}, which is not in the curve universe")]
    IncompleteUniverse { from: CurveId, missing: CurveId },
    #[error("no canned example named {0:?}")]
    NotFound(String),
    #[error("portrait is not critically finite: {0}")]
    NotCriticallyFinite(String),
    #[error("orbifold characteristic {0} is positive; the portrait is inconsistent")]
    PositiveCharacteristic(String),
    #[error("unsupported spec format version {0}")]
    Format(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("spec has {0} validation violation(s)")]
    Invalid(usize),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EngineError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("marked id {0} has no position")]
    MissingPosition(MarkedId),
    #[error("obstruction set {curves:?} has spectral radius {lambda} < 1")]
    Inconsistent { curves: Vec<CurveId>, lambda: f64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Umbrella error for callers that do not care which layer failed.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Format(#[from] FormatError),
}
