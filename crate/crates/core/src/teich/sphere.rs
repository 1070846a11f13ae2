//! Points of the Riemann sphere and Möbius transformations.

use num_complex::Complex;
use num_traits::Float;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Float> SpherePoint<T> {
    pub fn new(re: T, im: T) -> Self {
        Self::Finite(Complex::new(re, im))
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn finite(&self) -> Option<Complex<T>> {
        match self {
            Self::Finite(z) => Some(*z),
            Self::Infinity => None,
        }
    }

    pub fn is_finite_value(&self) -> bool {
        match self {
            Self::Finite(z) => z.re.is_finite() && z.im.is_finite(),
            Self::Infinity => true,
        }
    }

    /// Inverse stereographic projection onto the unit sphere; `∞` is the north pole.
    pub fn to_unit_vector(&self) -> [T; 3] {
        match self {
            Self::Infinity => [T::zero(), T::zero(), T::one()],
            Self::Finite(z) => {
                let n2 = z.norm_sqr();
                let d = T::one() + n2;
                let two = T::one() + T::one();
                [two * z.re / d, two * z.im / d, (n2 - T::one()) / d]
            }
        }
    }

    pub fn from_unit_vector(v: [T; 3]) -> Self {
        let denom = T::one() - v[2];
        if denom <= T::epsilon() {
            return Self::Infinity;
        }
        Self::new(v[0] / denom, v[1] / denom)
    }

    /// Euclidean distance between the images on the unit sphere, in `[0, 2]`.
    pub fn chordal_distance(&self, other: &Self) -> T {
        let two = T::one() + T::one();
        match (self, other) {
            (Self::Infinity, Self::Infinity) => T::zero(),
            (Self::Finite(z), Self::Infinity) | (Self::Infinity, Self::Finite(z)) => {
                two / (T::one() + z.norm_sqr()).sqrt()
            }
            (Self::Finite(z), Self::Finite(w)) => {
                two * (*z - *w).norm() / ((T::one() + z.norm_sqr()) * (T::one() + w.norm_sqr())).sqrt()
            }
        }
    }

    /// Great-circle distance on the unit sphere, in `[0, π]`.
    pub fn distance(&self, other: &Self) -> T {
        let two = T::one() + T::one();
        let half = (self.chordal_distance(other) / two).min(T::one());
        two * half.asin()
    }
}

impl<T: Float + Serialize> Serialize for SpherePoint<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Infinity => s.serialize_str("inf"),
            Self::Finite(z) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
        }
    }
}

/// `z ↦ (a z + b) / (c z + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Float> Mobius<T> {
    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { a: o, b: z, c: z, d: o }
    }

    pub fn apply(&self, p: &SpherePoint<T>) -> SpherePoint<T> {
        match p {
            SpherePoint::Infinity => {
                if self.c == Complex::new(T::zero(), T::zero()) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == T::zero() {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The map sending `q` to `∞` (`z ↦ 1/(z - q)`), or the identity when `q = ∞`.
    pub fn sending_to_infinity(q: &SpherePoint<T>) -> Self {
        match q {
            SpherePoint::Infinity => Self::identity(),
            SpherePoint::Finite(q) => {
                let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
                Self { a: z, b: o, c: o, d: -q }
            }
        }
    }

    /// The unique map sending `p0, p1, pinf` to `0, 1, ∞`.
    ///
    /// Returns `None` when two of the points coincide.
    pub fn normalizing(p0: &SpherePoint<T>, p1: &SpherePoint<T>, pinf: &SpherePoint<T>) -> Option<Self> {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        let m = match (p0, pinf) {
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => Self { a: o, b: -a, c: o, d: -b },
            (SpherePoint::Infinity, SpherePoint::Finite(b)) => Self { a: z, b: o, c: o, d: -b },
            (SpherePoint::Finite(a), SpherePoint::Infinity) => Self { a: o, b: -a, c: z, d: o },
            (SpherePoint::Infinity, SpherePoint::Infinity) => return None,
        };
        if p0 == pinf {
            return None;
        }
        let k = m.apply(p1).finite()?;
        if k.norm() == T::zero() || !(k.re.is_finite() && k.im.is_finite()) {
            return None;
        }
        Some(Self {
            a: m.a / k,
            b: m.b / k,
            c: m.c,
            d: m.d,
        })
    }
}

/// `(z1, z2; z3, z4) = (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))`.
pub fn cross_ratio<T: Float>(
    z1: &SpherePoint<T>,
    z2: &SpherePoint<T>,
    z3: &SpherePoint<T>,
    z4: &SpherePoint<T>,
) -> Option<SpherePoint<T>> {
    Mobius::normalizing(z3, z2, z4).map(|m| m.apply(z1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type P = SpherePoint<f64>;

    #[test]
    fn normalizing_sends_triple_to_standard_position() {
        let (a, b, c) = (P::new(2.0, 1.0), P::new(-1.0, 0.5), P::new(0.0, -3.0));
        let m = Mobius::normalizing(&a, &b, &c).unwrap();
        assert!(m.apply(&a).chordal_distance(&P::zero()) < 1e-14);
        assert!(m.apply(&b).chordal_distance(&P::one()) < 1e-14);
        assert!(m.apply(&c).is_infinite());
        let m = Mobius::normalizing(&P::Infinity, &b, &c).unwrap();
        assert!(m.apply(&P::Infinity).chordal_distance(&P::zero()) < 1e-14);
        assert!(Mobius::normalizing(&a, &b, &a).is_none());
    }

    #[test]
    fn distances() {
        assert_relative_eq!(P::zero().distance(&P::Infinity), std::f64::consts::PI);
        assert_relative_eq!(P::zero().distance(&P::one()), std::f64::consts::FRAC_PI_2);
        let v = P::new(0.3, -0.7).to_unit_vector();
        assert_relative_eq!(v.iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-15);
        let back = P::from_unit_vector(v).finite().unwrap();
        assert_relative_eq!(back.re, 0.3, epsilon = 1e-14);
    }

    #[test]
    fn cross_ratio_is_mobius_invariant() {
        let pts = [P::new(0.1, 0.2), P::new(1.5, -0.3), P::new(-2.0, 1.0), P::Infinity];
        let m = Mobius {
            a: Complex::new(1.0, 2.0),
            b: Complex::new(0.5, 0.0),
            c: Complex::new(-0.3, 0.1),
            d: Complex::new(2.0, -1.0),
        };
        let img: Vec<P> = pts.iter().map(|p| m.apply(p)).collect();
        let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap().finite().unwrap();
        let after = cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap().finite().unwrap();
        assert!((before - after).norm() < 1e-12);
        let f32_pt = SpherePoint::<f32>::new(1.0, 0.0);
        assert!(f32_pt.distance(&SpherePoint::Infinity) > 1.5);
    }
}
