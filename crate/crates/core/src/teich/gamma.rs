//! The multicurve of curves lying above the lowest long gap in `w`.

use std::collections::BTreeMap;

use crate::covering::CurveId;

/// Curves with `w ≥ b`, where `(a, b)` is the lowest interval of length `J`
/// with `a ≥ A` that contains no `w`-value.
pub fn gamma_j_extract(snapshot: &BTreeMap<CurveId, f64>, a_const: f64, j: f64) -> Vec<CurveId> {
    let mut a = a_const;
    loop {
        let inside = snapshot
            .values()
            .filter(|&&w| w > a && w < a + j)
            .fold(f64::NEG_INFINITY, |m, &w| m.max(w));
        if inside == f64::NEG_INFINITY {
            break;
        }
        a = inside;
    }
    let b = a + j;
    snapshot
        .iter()
        .filter(|(_, &w)| w >= b)
        .map(|(id, _)| id.clone())
        .collect()
}
