//! Exact rational polynomials: characteristic polynomials, Sturm counts and
//! rational root certification.

use num_traits::{One, Signed, Zero};

use super::dense::Matrix;
use crate::Rational;

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.lead();
        if self.is_zero() || self.degree() < dd {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Divides out every factor `(x - root)`.
    pub fn deflate(&self, root: &Rational) -> (Self, usize) {
        let linear = Self::new(vec![-root.clone(), Rational::one()]);
        let mut p = self.clone();
        let mut mult = 0;
        while !p.is_zero() && p.eval(root).is_zero() {
            p = p.div_rem(&linear).0;
            mult += 1;
        }
        (p, mult)
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Self::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        chain
    }

    fn sign_changes(chain: &[Self], x: &Rational) -> usize {
        let signs: Vec<bool> = chain
            .iter()
            .map(|p| p.eval(x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(a, b]`, for `a` not a root.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        Self::sign_changes(&chain, a).saturating_sub(Self::sign_changes(&chain, b))
    }
}

/// `det(xI - M)` by the Faddeev–LeVerrier recurrence.
pub fn characteristic_polynomial(m: &Matrix<Rational>) -> Poly {
    let n = m.dim();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = Matrix::<Rational>::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&mk).expect("same dimension");
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let am = m.mul(&next).expect("same dimension");
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + am.get(i, i));
        coeffs[n - k] = -trace / Rational::from_integer(k.into());
        mk = next;
    }
    Poly::new(coeffs)
}

/// Continued-fraction convergents of `x` with denominators up to `max_denom`.
pub fn convergents(x: f64, max_denom: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_denom as i128 {
            break;
        }
        out.push(Rational::new(h2.into(), k2.into()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// Certifies that a rational near `estimate` is the largest real root of `p`.
///
/// `bound` must be an upper bound for every real root. The candidate is
/// accepted only if it is an exact root and Sturm's theorem shows no other
/// real root lies above it.
pub fn certify_largest_rational_root(p: &Poly, estimate: f64, bound: &Rational) -> Option<Rational> {
    let above = bound + Rational::one();
    for cand in convergents(estimate, 1_000_000).into_iter().rev() {
        if cand.is_negative() || !p.eval(&cand).is_zero() {
            continue;
        }
        let (q, _) = p.deflate(&cand);
        if q.count_roots(&cand, &above) == 0 {
            return Some(cand);
        }
    }
    None
}
