//! Elementary inequalities of the length estimates, as checkable predicates.

use std::f64::consts::PI;

use super::geometry::round_annulus_modulus;

/// True iff `a[n₂] - a[n₁] ≥ κ` for all `n₁ < n₂`.
pub fn quasi_nondecreasing(seq: &[f64], kappa: f64) -> bool {
    let mut running_max = f64::NEG_INFINITY;
    for &x in seq {
        if x - running_max < kappa {
            return false;
        }
        running_max = running_max.max(x);
    }
    true
}

/// Collar modulus model `m(l) = π/l - 1/2`.
pub fn collar_modulus(l: f64) -> f64 {
    PI / l - 0.5
}

/// `π/l - 1 < m(l) < π/l`.
pub fn collar_within_bounds(l: f64) -> bool {
    let m = collar_modulus(l);
    PI / l - 1.0 < m && m < PI / l
}

/// `|log m(l) - w| < log π` with `w = -log l`.
pub fn collar_log_gap(l: f64) -> f64 {
    (collar_modulus(l).ln() + l.ln()).abs()
}

/// `log(t + 1) - 1 < log t`.
pub fn tech_holds(t: f64) -> bool {
    (t + 1.0).ln() - 1.0 < t.ln()
}

/// `e^a ≥ βe^b - 1 ⇒ a - b ≥ log β - 1`; vacuous when the premise fails.
pub fn tech2_holds(a: f64, b: f64, beta: f64) -> bool {
    if a.exp() < beta * b.exp() - 1.0 {
        return true;
    }
    a - b >= beta.ln() - 1.0
}

/// If `a` is κ-quasi-nondecreasing and `|a_n - b_n| < r`, then `b` is (κ - 2r)-quasi-nondecreasing.
pub fn pr1_holds(a: &[f64], b: &[f64], kappa: f64, r: f64) -> bool {
    if !quasi_nondecreasing(a, kappa) || a.iter().zip(b).any(|(x, y)| (x - y).abs() >= r) {
        return true;
    }
    quasi_nondecreasing(b, kappa - 2.0 * r)
}

/// For a κ-quasi-nondecreasing sequence, every value after the first to exceed `bound`
/// stays at least `bound + κ`.
pub fn pr2_holds(seq: &[f64], kappa: f64, bound: f64) -> bool {
    match seq.iter().position(|&x| x > bound) {
        None => true,
        Some(k) => seq[k..].iter().all(|&x| x >= bound + kappa),
    }
}

/// Sum of the moduli of round annuli `(r_k, R_k)` about a common center.
pub fn concentric_moduli_sum(radii: &[(f64, f64)]) -> f64 {
    radii.iter().map(|&(r, big_r)| round_annulus_modulus(r, big_r)).sum()
}
