//! Spider-algorithm realization of the pullback map for quadratic polynomial portraits.
//!
//! Configurations are normalized so that the finite critical point sits at `0`,
//! its image at `1` and the superattracting fixed point at `∞`. In these
//! coordinates a point `x` pulls back to `±√((w_{f(x)} - 1) / (w_{f(v₁)} - 1))`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::config::MarkedConfiguration;
use crate::covering::{CoveringSpec, MarkedId};
use crate::error::EngineError;
use crate::{Point, Rational};

/// Outer radius of the spider legs.
pub const LEG_RADIUS: f64 = 1e3;
/// Points per initial straight leg.
const INITIAL_SEGMENTS: usize = 60;
const RADIAL_STEPS: usize = 20;
const MIN_SPACING: f64 = 1e-9;
const MAX_SUBDIVISIONS: usize = 50;
const MAX_LEG_POINTS: usize = 200_000;
const DEGENERATE_TOL: f64 = 1e-14;
const TIE_TOL: f64 = 1e-12;

/// Roles of the marked points in a quadratic portrait.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpiderModel {
    pub critical: MarkedId,
    pub critical_value: MarkedId,
    pub infinity: MarkedId,
    /// Forward orbit of the critical value, in orbit order.
    pub orbit: Vec<MarkedId>,
    pub successor: BTreeMap<MarkedId, MarkedId>,
    /// External angle of each orbit point, when the portrait carries one.
    pub angles: Option<BTreeMap<MarkedId, f64>>,
}

fn config_error(msg: impl Into<String>) -> EngineError {
    EngineError::Config(msg.into())
}

impl SpiderModel {
    pub fn from_spec(spec: &CoveringSpec) -> Result<Self, EngineError> {
        let portrait = spec
            .portrait
            .as_ref()
            .ok_or_else(|| config_error("spec has no critical portrait and no oracle was given"))?;
        if spec.degree != 2 {
            return Err(config_error(format!("numeric mode needs degree 2, got {}", spec.degree)));
        }
        if spec.disks().next().is_some() {
            return Err(config_error("numeric mode does not support disk cycles"));
        }
        let a = &spec.anchors;
        let deg = |id: &MarkedId| portrait.point(id).map(|p| p.local_degree);
        if deg(&a.zero) != Some(2) {
            return Err(config_error(format!("anchor {} must be a critical point of degree 2", a.zero)));
        }
        if deg(&a.infinity) != Some(2) || portrait.successor(&a.infinity) != Some(&a.infinity) {
            return Err(config_error(format!("anchor {} must be a critical fixed point", a.infinity)));
        }
        if portrait.successor(&a.zero) != Some(&a.one) {
            return Err(config_error(format!("anchor {} must be the image of {}", a.one, a.zero)));
        }
        let mut successor = BTreeMap::new();
        for p in &portrait.points {
            successor.insert(p.id.clone(), p.successor.clone());
        }
        let mut orbit = vec![a.one.clone()];
        loop {
            let last = orbit.last().expect("orbit is non-empty");
            let next = successor
                .get(last)
                .ok_or_else(|| config_error(format!("{last} has no successor")))?
                .clone();
            if orbit.contains(&next) {
                break;
            }
            if next == a.infinity {
                return Err(config_error("critical orbit escapes to infinity"));
            }
            orbit.push(next);
        }
        for id in &spec.p1_points {
            if *id != a.zero && *id != a.infinity && !orbit.contains(id) {
                return Err(config_error(format!("{id} is not on the critical orbit")));
            }
        }
        for id in &orbit {
            if !spec.p1_points.contains(id) {
                return Err(config_error(format!("orbit point {id} is not marked")));
            }
        }
        let angles = match portrait.angle() {
            None => None,
            Some(theta) => Some(orbit_angles(&orbit, &successor, theta)?),
        };
        Ok(Self {
            critical: a.zero.clone(),
            critical_value: a.one.clone(),
            infinity: a.infinity.clone(),
            orbit,
            successor,
            angles,
        })
    }

    fn succ(&self, id: &MarkedId) -> &MarkedId {
        &self.successor[id]
    }
}

fn orbit_angles(
    orbit: &[MarkedId],
    successor: &BTreeMap<MarkedId, MarkedId>,
    theta: Rational,
) -> Result<BTreeMap<MarkedId, f64>, EngineError> {
    let frac = |t: Rational| t.clone() - t.floor();
    let mut exact: BTreeMap<MarkedId, Rational> = BTreeMap::new();
    let mut id = orbit[0].clone();
    let mut t = frac(theta);
    loop {
        if let Some(prev) = exact.get(&id) {
            if *prev != t {
                return Err(config_error(format!("angle is not compatible with the orbit at {id}")));
            }
            break;
        }
        exact.insert(id.clone(), t.clone());
        t = frac(t * Rational::from_integer(2.into()));
        id = successor[&id].clone();
    }
    Ok(exact
        .into_iter()
        .map(|(k, v)| (k, crate::Scalar::to_f64(&v)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepDiagnostics {
    /// Largest spherical move of a marked point.
    pub displacement: f64,
    /// Points whose two preimages were equidistant from the previous position.
    pub ties: Vec<MarkedId>,
}

/// Picks `±r` closest to `prev`; exact ties go to the smaller principal argument.
fn nearest_branch(r: Complex64, prev: Complex64) -> (Complex64, bool) {
    let (dp, dm) = ((r - prev).norm(), (-r - prev).norm());
    if (dp - dm).abs() <= TIE_TOL * prev.norm().max(1.0) {
        let pick = if r.arg() <= (-r).arg() { r } else { -r };
        (pick, true)
    } else if dp < dm {
        (r, false)
    } else {
        (-r, false)
    }
}

fn finite_position(config: &MarkedConfiguration, id: &MarkedId) -> Result<Complex64, EngineError> {
    config
        .position(id)?
        .finite()
        .ok_or_else(|| EngineError::Degenerate(format!("{id} sits at infinity")))
}

/// One pullback step on marked positions, choosing the preimage nearest the previous position.
pub fn pullback_step(
    config: &MarkedConfiguration,
    spec: &CoveringSpec,
) -> Result<(MarkedConfiguration, StepDiagnostics), EngineError> {
    let model = SpiderModel::from_spec(spec)?;
    let w = |id: &MarkedId| finite_position(config, id);
    let denom = w(model.succ(&model.critical_value))? - Complex64::one();
    if denom.norm() < DEGENERATE_TOL {
        return Err(EngineError::Degenerate("critical value image collides with the critical value".into()));
    }
    let mut next = config.clone();
    let mut ties = Vec::new();
    for x in &model.orbit {
        if *x == model.critical_value {
            next.positions.insert(x.clone(), Point::one());
            continue;
        }
        let num = w(model.succ(x))? - Complex64::one();
        if *x == model.critical {
            next.positions.insert(x.clone(), Point::zero());
            continue;
        }
        if num.norm() < DEGENERATE_TOL {
            return Err(EngineError::Degenerate(format!("{x} pulls back onto the critical point")));
        }
        let (pick, tie) = nearest_branch((num / denom).sqrt(), w(x)?);
        if tie {
            ties.push(x.clone());
        }
        next.positions.insert(x.clone(), Point::Finite(pick));
    }
    let next = next.normalize()?;
    let displacement = displacement(config, &next);
    Ok((next, StepDiagnostics { displacement, ties }))
}

/// Largest spherical distance between corresponding positions.
pub fn displacement(a: &MarkedConfiguration, b: &MarkedConfiguration) -> f64 {
    a.positions
        .iter()
        .filter_map(|(id, p)| b.positions.get(id).map(|q| p.distance(q)))
        .fold(0.0, f64::max)
}

/// Spider with legs: positions in the dynamical chart `z ↦ z² + c` plus a leg
/// from each orbit point out to radius [`LEG_RADIUS`] at its external angle.
#[derive(Clone, Debug)]
pub struct SpiderState {
    pub model: SpiderModel,
    z: BTreeMap<MarkedId, Complex64>,
    legs: BTreeMap<MarkedId, Vec<Complex64>>,
}

impl SpiderState {
    pub fn new(spec: &CoveringSpec, config: &MarkedConfiguration) -> Result<Self, EngineError> {
        let model = SpiderModel::from_spec(spec)?;
        let angles = model
            .angles
            .clone()
            .ok_or_else(|| config_error("portrait has no external angle for the spider legs"))?;
        let mut z = BTreeMap::new();
        let mut legs = BTreeMap::new();
        for x in &model.orbit {
            let foot = finite_position(config, x)?;
            let far = Complex64::from_polar(LEG_RADIUS, TAU * angles[x]);
            let leg = (0..=INITIAL_SEGMENTS)
                .map(|k| foot + (far - foot) * (k as f64 / INITIAL_SEGMENTS as f64))
                .collect();
            z.insert(x.clone(), foot);
            legs.insert(x.clone(), leg);
        }
        Ok(Self { model, z, legs })
    }

    /// Current quadratic parameter `c`, the position of the critical value.
    pub fn parameter(&self) -> Complex64 {
        self.z[&self.model.critical_value]
    }

    pub fn leg(&self, id: &MarkedId) -> Option<&[Complex64]> {
        self.legs.get(id).map(Vec::as_slice)
    }

    pub fn step(&mut self) -> Result<(), EngineError> {
        let c = self.parameter();
        if c.norm() < DEGENERATE_TOL {
            return Err(EngineError::Degenerate("critical value collides with the critical point".into()));
        }
        let angles = self.model.angles.as_ref().expect("legged spider has angles");
        let mut legs = BTreeMap::new();
        for x in &self.model.orbit {
            let source = &self.legs[self.model.succ(x)];
            let leg = lift_leg(source, c, angles[x])?;
            legs.insert(x.clone(), leg);
        }
        self.z = legs.iter().map(|(k, leg)| (k.clone(), leg[0])).collect();
        self.legs = legs;
        Ok(())
    }

    /// The normalized configuration `w = z / c`, with the remaining fields taken from `like`.
    pub fn configuration(&self, like: &MarkedConfiguration) -> MarkedConfiguration {
        let c = self.parameter();
        let mut out = like.clone();
        for (id, z) in &self.z {
            let p = if *id == self.model.critical_value {
                Point::one()
            } else if *id == self.model.critical {
                Point::zero()
            } else {
                Point::Finite(z / c)
            };
            out.positions.insert(id.clone(), p);
        }
        out.positions.insert(self.model.critical.clone(), Point::zero());
        out.positions.insert(self.model.infinity.clone(), Point::Infinity);
        out
    }
}

/// Lifts a leg under `z ↦ z² + c`, starting from the branch whose far end points at `theta`.
fn lift_leg(leg: &[Complex64], c: Complex64, theta: f64) -> Result<Vec<Complex64>, EngineError> {
    let target = Complex64::from_polar(1.0, TAU * theta);
    let far = (leg[leg.len() - 1] - c).sqrt();
    let far = if (far / far.norm() - target).norm() > (-far / far.norm() - target).norm() { -far } else { far };
    let mut back = Vec::with_capacity(leg.len() + RADIAL_STEPS);
    back.push(far);
    for p in leg[..leg.len() - 1].iter().rev() {
        let s = (p - c).sqrt();
        let prev = back[back.len() - 1];
        back.push(if (s - prev).norm() <= (-s - prev).norm() { s } else { -s });
    }
    back.reverse();
    let end = back[back.len() - 1];
    if end.is_zero() || !end.norm().is_finite() {
        return Err(EngineError::Degenerate("leg passes through the critical value".into()));
    }
    let scale = LEG_RADIUS / end.norm();
    back.extend((1..=RADIAL_STEPS).map(|t| end * scale.powf(t as f64 / RADIAL_STEPS as f64)));

    let mut thinned: Vec<Complex64> = Vec::with_capacity(back.len());
    for p in back {
        if thinned.last().is_none_or(|q| (p - q).norm() > MIN_SPACING) {
            thinned.push(p);
        }
    }
    let mut out = vec![thinned[0]];
    for &p in &thinned[1..] {
        let q = out[out.len() - 1];
        let len = (p - q).norm();
        let step = 0.05 * p.norm().min(q.norm()).max(1.0);
        let k = ((len / step) as usize).clamp(1, MAX_SUBDIVISIONS);
        out.extend((1..=k).map(|t| q + (p - q) * (t as f64 / k as f64)));
    }
    if out.len() > MAX_LEG_POINTS {
        return Err(EngineError::Degenerate("spider leg grew beyond the point budget".into()));
    }
    Ok(out)
}
