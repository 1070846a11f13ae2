//! Plane geometry for round annuli.

use num_complex::Complex64;

use super::sphere::Mobius;
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: Complex64) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-300
    }

    fn from_two(a: Complex64, b: Complex64) -> Self {
        let center = (a + b) / 2.0;
        Self {
            center,
            radius: (a - center).norm().max((b - center).norm()),
        }
    }

    fn from_three(a: Complex64, b: Complex64, c: Complex64) -> Self {
        let (bx, cx) = (b - a, c - a);
        let d = 2.0 * (bx.re * cx.im - bx.im * cx.re);
        if d.abs() < 1e-300 {
            // collinear: the widest pair spans the circle
            return [Self::from_two(a, b), Self::from_two(a, c), Self::from_two(b, c)]
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .expect("three candidates");
        }
        let (b2, c2) = (bx.norm_sqr(), cx.norm_sqr());
        let u = Complex64::new(cx.im * b2 - bx.im * c2, bx.re * c2 - cx.re * b2) / d;
        let center = a + u;
        let radius = [a, b, c].iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
        Self { center, radius }
    }
}

/// Smallest circle containing `points` (incremental Welzl construction).
///
/// Returns `None` for an empty slice.
pub fn minimal_enclosing_circle(points: &[Complex64]) -> Option<Circle> {
    let first = *points.first()?;
    let mut c = Circle {
        center: first,
        radius: 0.0,
    };
    for i in 1..points.len() {
        if c.contains(points[i]) {
            continue;
        }
        c = Circle {
            center: points[i],
            radius: 0.0,
        };
        for j in 0..i {
            if c.contains(points[j]) {
                continue;
            }
            c = Circle::from_two(points[i], points[j]);
            for k in 0..j {
                if !c.contains(points[k]) {
                    c = Circle::from_three(points[i], points[j], points[k]);
                }
            }
        }
    }
    Some(c)
}

/// Modulus `log(R/r) / 2π` of a round annulus with radii `r < R`, else 0.
pub fn round_annulus_modulus(r: f64, big_r: f64) -> f64 {
    if r > 0.0 && big_r > r {
        (big_r / r).ln() / std::f64::consts::TAU
    } else if r == 0.0 && big_r > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Modulus of the widest round annulus about the enclosing circle of `inner`
/// that contains no point of `outer`, in the plane.
pub fn planar_separating_modulus(inner: &[Complex64], outer: &[Complex64]) -> f64 {
    let Some(circle) = minimal_enclosing_circle(inner) else {
        return 0.0;
    };
    let big_r = outer
        .iter()
        .map(|p| (p - circle.center).norm())
        .fold(f64::INFINITY, f64::min);
    if big_r.is_infinite() {
        return f64::INFINITY;
    }
    round_annulus_modulus(circle.radius, big_r)
}

/// Best round-annulus modulus separating `inner` from `outer` on the sphere.
///
/// Every point of `outer` is tried as the point sent to `∞`.
pub fn separating_modulus(inner: &[Point], outer: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (k, q) in outer.iter().enumerate() {
        let m = Mobius::sending_to_infinity(q);
        let Some(inner_img) = inner.iter().map(|p| m.apply(p).finite()).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let outer_img: Vec<Complex64> = outer
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .filter_map(|(_, p)| m.apply(p).finite())
            .collect();
        best = best.max(planar_separating_modulus(&inner_img, &outer_img));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosing_circle_of_triangle() {
        let pts = [Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.1)];
        let c = minimal_enclosing_circle(&pts).unwrap();
        assert!((c.center - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((c.radius - 1.0).abs() < 1e-12);
        let eq = [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, 2.0944), Complex64::from_polar(1.0, -2.0944)];
        let c = minimal_enclosing_circle(&eq).unwrap();
        assert!(c.center.norm() < 1e-4 && (c.radius - 1.0).abs() < 1e-4);
    }

    #[test]
    fn two_point_cluster_modulus() {
        let r = 1e-6;
        let inner = [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)];
        let outer = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 3.0)];
        let m = planar_separating_modulus(&inner, &outer);
        assert!((m - 1e6f64.ln() / std::f64::consts::TAU).abs() < 1e-9);
    }
}
