//! Obstruction analysis for sub-hyperbolic branched coverings of the sphere.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`matrix`] works with non-negative multicurve transition matrices:
//!   spectral radii with certified enclosures, Frobenius normal forms,
//!   depth decompositions and obstruction verdicts. Everything is generic
//!   over [`Scalar`], so the same code runs on exact rationals and floats.
//! * [`covering`] holds the combinatorial data model of a covering
//!   (marked points, disk cycles, curve universe, pullback tables) together
//!   with validation and a set of canned examples.
//! * [`teich`] iterates the pullback map on marked configurations, estimates
//!   curve lengths from round annuli, evaluates the theory's constants and
//!   extracts the canonical obstruction from iteration traces.
//! * [`format`] fixes the on-disk trace, report, oracle and CSV formats.

pub mod covering;
pub mod error;
pub mod format;
pub mod matrix;
pub mod scalar;
pub mod teich;

pub use covering::{CoveringSpec, CurveId, MarkedId};
pub use error::{EngineError, Error, FormatError, MatrixError, SpecError};
pub use matrix::{Matrix, SpectralRadius, TransitionMatrix};
pub use scalar::Scalar;

/// Arbitrary precision rational, used for all exact matrix work.
pub type Rational = num_rational::BigRational;

/// Transition-matrix storage used by the obstruction machinery.
pub type ExactMatrix = Matrix<Rational>;

/// Double precision matrix.
pub type FloatMatrix = Matrix<f64>;

/// Single precision matrix.
pub type Float32Matrix = Matrix<f32>;

/// Riemann sphere point in double precision.
pub type Point = teich::sphere::SpherePoint<f64>;

/// Build the rational `numer / denom`.
///
/// Panics when `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}
