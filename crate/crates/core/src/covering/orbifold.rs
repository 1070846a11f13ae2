use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::spec::{CriticalPortrait, MarkedId};
use crate::error::SpecError;
use crate::scalar::{format_rational, serialize_opt_rational};
use crate::{ratio, Rational};

/// Orbifold weight `ν_f(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nu {
    Finite(u64),
    Infinite,
}

impl Nu {
    /// `1 - 1/ν`.
    pub fn defect(&self) -> Rational {
        match self {
            Nu::Finite(n) => Rational::one() - ratio(1, *n as i64),
            Nu::Infinite => Rational::one(),
        }
    }
}

impl fmt::Display for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu::Finite(n) => write!(f, "{n}"),
            Nu::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Nu {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Nu::Finite(n) => s.serialize_u64(*n),
            Nu::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbifoldClass {
    Hyperbolic,
    Parabolic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Orbifold {
    pub nu: BTreeMap<MarkedId, Nu>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub chi_exact: Option<Rational>,
    pub chi: f64,
    pub class: OrbifoldClass,
}

/// Signature and Euler characteristic of the orbifold of a portrait.
///
/// Points in a cycle containing a critical point get `ν = ∞`; every other
/// weight is the lcm of `deg · ν` over marked preimages.
pub fn orbifold_characteristic(portrait: &CriticalPortrait) -> Result<Orbifold, SpecError> {
    let ids: Vec<&MarkedId> = portrait.points.iter().map(|p| &p.id).collect();
    let index = |id: &MarkedId| ids.iter().position(|x| *x == id);
    let mut succ = Vec::with_capacity(ids.len());
    for p in &portrait.points {
        if p.local_degree == 0 {
            return Err(SpecError::NotCriticallyFinite(format!("{} has local degree 0", p.id)));
        }
        match index(&p.successor) {
            Some(j) => succ.push(j),
            None => {
                return Err(SpecError::NotCriticallyFinite(format!(
                    "orbit of {} leaves the portrait at {}",
                    p.id, p.successor
                )))
            }
        }
    }
    let n = ids.len();
    let deg: Vec<u64> = portrait.points.iter().map(|p| p.local_degree as u64).collect();

    let mut infinite = vec![false; n];
    for start in 0..n {
        // start is periodic iff it returns to itself within n steps
        let mut x = succ[start];
        let mut critical = deg[start] > 1;
        for _ in 0..n {
            if x == start {
                break;
            }
            critical |= deg[x] > 1;
            x = succ[x];
        }
        if x == start && critical {
            infinite[start] = true;
        }
    }

    let mut nu = vec![1u64; n];
    for _ in 0..=n {
        let mut next = vec![1u64; n];
        for y in 0..n {
            let x = succ[y];
            next[x] = next[x].lcm(&(deg[y] * nu[y]));
        }
        for (x, v) in next.iter_mut().enumerate() {
            if infinite[x] {
                *v = 1;
            }
        }
        if next == nu {
            break;
        }
        nu = next;
    }

    let mut map = BTreeMap::new();
    let mut chi = ratio(2, 1);
    for (k, id) in ids.iter().enumerate() {
        let v = if infinite[k] { Nu::Infinite } else { Nu::Finite(nu[k]) };
        chi -= v.defect();
        map.insert((*id).clone(), v);
    }
    let class = if chi.is_zero() {
        OrbifoldClass::Parabolic
    } else if chi < Rational::zero() {
        OrbifoldClass::Hyperbolic
    } else {
        return Err(SpecError::PositiveCharacteristic(format_rational(&chi)));
    };
    Ok(Orbifold {
        nu: map,
        chi: crate::Scalar::to_f64(&chi),
        chi_exact: Some(chi),
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::spec::PortraitPoint;

    fn portrait(points: &[(&str, &str, u32)]) -> CriticalPortrait {
        CriticalPortrait {
            points: points
                .iter()
                .map(|&(id, s, d)| PortraitPoint {
                    id: id.into(),
                    successor: s.into(),
                    local_degree: d,
                })
                .collect(),
            superattracting: vec![],
            angle: None,
        }
    }

    #[test]
    fn z_squared_is_parabolic() {
        let o = orbifold_characteristic(&portrait(&[("0", "0", 2), ("inf", "inf", 2)])).unwrap();
        assert_eq!(o.nu[&MarkedId::from("0")], Nu::Infinite);
        assert_eq!(o.chi_exact, Some(ratio(0, 1)));
        assert_eq!(o.class, OrbifoldClass::Parabolic);
    }

    #[test]
    fn chebyshev_signature() {
        // z^2 - 2: 0 -> -2 -> 2 -> 2
        let o = orbifold_characteristic(&portrait(&[
            ("c", "m2", 2),
            ("m2", "p2", 1),
            ("p2", "p2", 1),
            ("inf", "inf", 2),
        ]))
        .unwrap();
        assert_eq!(o.nu[&MarkedId::from("m2")], Nu::Finite(2));
        assert_eq!(o.nu[&MarkedId::from("p2")], Nu::Finite(2));
        assert_eq!(o.class, OrbifoldClass::Parabolic);
    }

    #[test]
    fn open_orbit_is_rejected() {
        let err = orbifold_characteristic(&portrait(&[("c", "v", 2)])).unwrap_err();
        assert!(matches!(err, SpecError::NotCriticallyFinite(_)));
    }

    #[test]
    fn positive_characteristic_is_reported() {
        // a lone critical point mapping to a non-critical fixed point
        let err = orbifold_characteristic(&portrait(&[("c", "v", 2), ("v", "v", 1)])).unwrap_err();
        assert!(matches!(err, SpecError::PositiveCharacteristic(_)));
    }
}
