//! Perron–Frobenius data for non-negative matrices.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::dense::Matrix;
use super::frobenius::{frobenius_normal_form_with, is_irreducible};
use super::poly::{certify_largest_rational_root, characteristic_polynomial};
use crate::error::MatrixError;
use crate::scalar::{serialize_opt_rational, serialize_opt_rational_vec, Scalar};
use crate::{ratio, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralOptions {
    /// Relative width at which a Collatz–Wielandt enclosure is accepted.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest block size for which an exact rational value is attempted.
    pub exact_max_dim: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
            exact_max_dim: 4,
        }
    }
}

/// Certified enclosure `lower <= λ <= upper`, plus the exact value when known.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralRadius {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub exact: Option<Rational>,
}

impl SpectralRadius {
    fn exactly(r: Rational) -> Self {
        let v = r.to_f64();
        Self {
            lower: v,
            upper: v,
            value: v,
            exact: Some(r),
        }
    }

    fn enclosure(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            upper,
            value: 0.5 * (lower + upper),
            exact: None,
        }
    }

    /// Compares λ with a rational threshold, exactly when possible.
    pub fn cmp_rational(&self, t: &Rational) -> Ordering {
        if let Some(e) = &self.exact {
            return e.cmp(t);
        }
        let tf = t.to_f64();
        if self.lower > tf {
            Ordering::Greater
        } else if self.upper < tf {
            Ordering::Less
        } else {
            self.value.partial_cmp(&tf).unwrap_or(Ordering::Equal)
        }
    }

    pub fn at_least_one(&self) -> bool {
        self.cmp_rational(&Rational::one()) != Ordering::Less
    }

    /// Largest of several block radii, `max_j λ(A_jj)`.
    pub fn max_of<'a>(radii: impl IntoIterator<Item = &'a SpectralRadius>) -> SpectralRadius {
        let radii: Vec<&SpectralRadius> = radii.into_iter().collect();
        if radii.is_empty() {
            return Self::exactly(Rational::zero());
        }
        let lower = radii.iter().map(|r| r.lower).fold(f64::NEG_INFINITY, f64::max);
        let upper = radii.iter().map(|r| r.upper).fold(f64::NEG_INFINITY, f64::max);
        let value = radii.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
        let best_exact = radii.iter().filter_map(|r| r.exact.as_ref()).max().cloned();
        if let Some(e) = best_exact {
            let ef = e.to_f64();
            let dominates = radii.iter().all(|r| match &r.exact {
                Some(x) => *x <= e,
                None => r.upper < ef,
            });
            if dominates {
                return Self::exactly(e);
            }
        }
        Self { lower, upper, value, exact: None }
    }
}

/// Perron root of one diagonal block (irreducible or 1x1).
pub(crate) fn block_radius<T: Scalar>(m: &Matrix<T>, opts: &SpectralOptions) -> Result<SpectralRadius, MatrixError> {
    let n = m.dim();
    if n == 1 {
        let e = m.get(0, 0);
        return Ok(match e.to_exact() {
            Some(r) => SpectralRadius::exactly(r),
            None => SpectralRadius::enclosure(e.to_f64(), e.to_f64()),
        });
    }
    let (lo, hi, _) = perron_float(&m.to_f64(), opts)?;
    if T::EXACT && n <= opts.exact_max_dim {
        if let Some(r) = exact_root(m, 0.5 * (lo + hi)) {
            return Ok(SpectralRadius::exactly(r));
        }
    }
    Ok(SpectralRadius::enclosure(lo, hi))
}

fn exact_root<T: Scalar>(m: &Matrix<T>, estimate: f64) -> Option<Rational> {
    let exact = m.map_exact()?;
    let bound = exact
        .rows()
        .map(|row| row.iter().fold(Rational::zero(), |acc, x| acc + x))
        .max()?;
    certify_largest_rational_root(&characteristic_polynomial(&exact), estimate, &bound)
}

impl<T: Scalar> Matrix<T> {
    fn map_exact(&self) -> Option<Matrix<Rational>> {
        let rows: Option<Vec<Vec<Rational>>> = self
            .rows()
            .map(|row| row.iter().map(|x| x.to_exact()).collect())
            .collect();
        Matrix::from_rows(rows?).ok()
    }
}

fn collatz_wielandt(m: &DMatrix<f64>, v: &DVector<f64>) -> (f64, f64) {
    let mv = m * v;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (a, b) in mv.iter().zip(v.iter()) {
        let r = a / b;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo.max(0.0), hi)
}

/// Shifted inverse iteration for an irreducible non-negative matrix.
///
/// Returns the final Collatz–Wielandt bounds and the positive iterate,
/// max-normalized.
fn perron_float(m: &Matrix<f64>, opts: &SpectralOptions) -> Result<(f64, f64, Vec<f64>), MatrixError> {
    let n = m.dim();
    let a = DMatrix::from_row_slice(n, n, m.entries());
    let mut v = DVector::from_element(n, 1.0);
    let (mut lo, mut hi) = collatz_wielandt(&a, &v);
    let scale = hi.max(1.0);
    for _ in 0..opts.max_iter {
        if hi - lo <= opts.tol * hi.max(1.0) {
            return Ok((lo, hi, v.iter().copied().collect()));
        }
        let shift = hi + (hi - lo).max(1e-9 * scale);
        let b = DMatrix::from_diagonal_element(n, n, shift) - &a;
        let Some(w) = b.lu().solve(&v) else {
            break;
        };
        let norm = w.amax();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        v = w.map(|x| (x.abs() / norm).max(f64::MIN_POSITIVE));
        let (l, h) = collatz_wielandt(&a, &v);
        lo = lo.max(l);
        hi = hi.min(h);
    }
    if hi - lo <= opts.tol * hi.max(1.0) {
        return Ok((lo, hi, v.iter().copied().collect()));
    }
    Err(MatrixError::NoConvergence {
        iterations: opts.max_iter,
        lower: lo,
        upper: hi,
    })
}

/// `λ(M)` for any non-negative square matrix, taken blockwise over the
/// Frobenius normal form.
pub fn spectral_radius<T: Scalar>(m: &Matrix<T>) -> Result<SpectralRadius, MatrixError> {
    spectral_radius_with(m, &SpectralOptions::default())
}

pub fn spectral_radius_with<T: Scalar>(m: &Matrix<T>, opts: &SpectralOptions) -> Result<SpectralRadius, MatrixError> {
    Ok(frobenius_normal_form_with(m, opts)?.spectral_radius)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigenvector {
    /// Positive, with largest coordinate 1.
    pub values: Vec<f64>,
    #[serde(serialize_with = "serialize_opt_rational_vec")]
    pub exact: Option<Vec<Rational>>,
    pub radius: SpectralRadius,
}

impl Eigenvector {
    pub fn min_coordinate(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn exact_min_coordinate(&self) -> Option<Rational> {
        self.exact.as_ref().and_then(|v| v.iter().min().cloned())
    }
}

/// Positive Perron eigenvector of an irreducible matrix, max-normalized.
pub fn leading_eigenvector<T: Scalar>(m: &Matrix<T>) -> Result<Eigenvector, MatrixError> {
    leading_eigenvector_with(m, &SpectralOptions::default())
}

pub fn leading_eigenvector_with<T: Scalar>(m: &Matrix<T>, opts: &SpectralOptions) -> Result<Eigenvector, MatrixError> {
    if !is_irreducible(m)? {
        return Err(MatrixError::Reducible);
    }
    let radius = block_radius(m, opts)?;
    if m.dim() == 1 {
        return Ok(Eigenvector {
            values: vec![1.0],
            exact: radius.exact.as_ref().map(|_| vec![Rational::one()]),
            radius,
        });
    }
    if let (Some(lambda), Some(exact_m)) = (&radius.exact, m.map_exact()) {
        if let Some(v) = exact_kernel_vector(&exact_m, lambda) {
            return Ok(Eigenvector {
                values: v.iter().map(Scalar::to_f64).collect(),
                exact: Some(v),
                radius,
            });
        }
    }
    let (_, _, v) = perron_float(&m.to_f64(), opts)?;
    Ok(Eigenvector {
        values: v,
        exact: None,
        radius,
    })
}

/// Positive kernel vector of `M - λI`, max-normalized, when the kernel is a line.
fn exact_kernel_vector(m: &Matrix<Rational>, lambda: &Rational) -> Option<Vec<Rational>> {
    let n = m.dim();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = m.get(i, j).clone();
                    if i == j {
                        x - lambda
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Rational::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let sub = &f * &a[row][c];
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); n];
    v[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[r][free].clone();
    }
    let max = v.iter().map(Signed::abs).max()?;
    let v: Vec<Rational> = v.into_iter().map(|x| x / &max).collect();
    v.iter().all(Signed::is_positive).then_some(v)
}

/// Least `m >= 1` with `‖M^m‖ < 1/2`; requires `λ(M) < 1`.
pub fn smallest_halving_power<T: Scalar>(m: &Matrix<T>, cap: usize) -> Result<usize, MatrixError> {
    let lambda = spectral_radius(m)?;
    if lambda.at_least_one() {
        return Err(MatrixError::RadiusNotBelowOne { lambda: lambda.value });
    }
    let half = T::from_ratio(1, 2);
    let mut power = m.clone();
    for k in 1..=cap {
        if power.max_norm() < half {
            return Ok(k);
        }
        power = power.mul(m)?;
    }
    Err(MatrixError::PowerCapExceeded { cap })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Beta {
    pub value: f64,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub exact: Option<Rational>,
}

/// Smallest coordinate of the normalized Perron vectors over a family.
///
/// Every member must be irreducible with `λ >= 1`.
pub fn beta_over_family<T: Scalar>(family: &[Matrix<T>]) -> Result<Beta, MatrixError> {
    if family.is_empty() {
        return Err(MatrixError::Empty);
    }
    let mut value = f64::INFINITY;
    let mut inexact_min = f64::INFINITY;
    let mut exact_min: Option<Rational> = None;
    for (index, m) in family.iter().enumerate() {
        let member = |reason: String| MatrixError::FamilyMember { index, reason };
        let ev = match leading_eigenvector(m) {
            Ok(ev) => ev,
            Err(e) => return Err(member(e.to_string())),
        };
        if !ev.radius.at_least_one() {
            return Err(member(format!("spectral radius {} is below 1", ev.radius.value)));
        }
        value = value.min(ev.min_coordinate());
        match ev.exact_min_coordinate() {
            Some(b) => exact_min = Some(exact_min.map_or(b.clone(), |a| a.min(b))),
            None => inexact_min = inexact_min.min(ev.min_coordinate()),
        }
    }
    let exact = exact_min.filter(|e| inexact_min > e.to_f64());
    Ok(Beta { value, exact })
}

/// Universal β over every matrix shape a degree `d` cover with `p`
/// marked objects can produce, ignoring realizability.
///
/// Columns range over all ways of distributing preimage components of
/// total degree at most `d` among at most `p - 3` curves.
pub fn universal_beta(degree: u32, p: usize) -> Result<Beta, MatrixError> {
    if degree > 2 || p > 5 || degree < 2 {
        return Err(MatrixError::EnumerationTooLarge { degree, p });
    }
    let max_curves = p.saturating_sub(3);
    let mut family = Vec::new();
    for n in 1..=max_curves {
        let columns = column_choices(n, degree);
        let total = columns.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut m = Matrix::<Rational>::zeros(n);
            for j in 0..n {
                let col = &columns[c % columns.len()];
                c /= columns.len();
                for (i, x) in col.iter().enumerate() {
                    m.set(i, j, x.clone());
                }
            }
            if is_irreducible(&m)? && spectral_radius(&m)?.at_least_one() {
                family.push(m);
            }
        }
    }
    if family.is_empty() {
        return Ok(Beta {
            value: 1.0,
            exact: Some(Rational::one()),
        });
    }
    beta_over_family(&family)
}

/// Every column obtainable from multisets of `(curve, degree)` components
/// with total degree at most `d`.
fn column_choices(n: usize, d: u32) -> Vec<Vec<Rational>> {
    fn extend(n: usize, budget: u32, start: usize, col: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
        if !out.contains(col) {
            out.push(col.clone());
        }
        for i in start..n {
            for k in 1..=budget {
                col[i] = &col[i] + ratio(1, k as i64);
                extend(n, budget - k, i, col, out);
                col[i] = &col[i] - ratio(1, k as i64);
            }
        }
    }
    let mut out = Vec::new();
    extend(n, d, 0, &mut vec![Rational::zero(); n], &mut out);
    out
}
