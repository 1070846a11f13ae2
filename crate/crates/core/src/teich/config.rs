//! Normalized marked configurations and their bounded-geometry statistics.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sphere::{Mobius, SpherePoint};
use crate::covering::{Anchors, CoveringSpec, MarkedId};
use crate::error::EngineError;
use crate::format::extended_f64;
use crate::Point;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskState {
    pub center: MarkedId,
    /// Spherical radius.
    pub radius: f64,
}

/// Positions of `P₁` and the disk centers, with anchors at `0, 1, ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedConfiguration {
    pub anchors: Anchors,
    pub positions: BTreeMap<MarkedId, Point>,
    /// Keyed by disk id.
    pub disks: BTreeMap<MarkedId, DiskState>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Placement {
    Seed(u64),
    Explicit(BTreeMap<MarkedId, Point>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InitOptions {
    /// Initial disk radius as a fraction of the distance to the nearest other object.
    pub radius_fraction: f64,
    /// Smallest spherical distance accepted between random points.
    pub min_separation: f64,
}

impl Default for InitOptions {
    fn default() -> Self {
        Self {
            radius_fraction: 0.25,
            min_separation: 1e-3,
        }
    }
}

/// Point drawn uniformly from the unit sphere.
pub fn random_sphere_point(rng: &mut impl Rng) -> Point {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    SpherePoint::from_unit_vector([r * phi.cos(), r * phi.sin(), z])
}

pub fn initialize_configuration(
    spec: &CoveringSpec,
    placement: &Placement,
    opts: &InitOptions,
) -> Result<MarkedConfiguration, EngineError> {
    let mut ids: Vec<MarkedId> = spec.p1_points.clone();
    ids.extend(spec.disks().map(|d| d.center.clone()));
    let mut positions = BTreeMap::new();
    match placement {
        Placement::Explicit(given) => {
            for id in given.keys() {
                if !ids.contains(id) {
                    return Err(EngineError::Argument(format!("{id} is not a positioned marked id")));
                }
            }
            for id in &ids {
                let p = given.get(id).ok_or_else(|| EngineError::MissingPosition(id.clone()))?;
                positions.insert(id.clone(), *p);
            }
        }
        Placement::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            positions.insert(spec.anchors.zero.clone(), Point::zero());
            positions.insert(spec.anchors.one.clone(), Point::one());
            positions.insert(spec.anchors.infinity.clone(), Point::Infinity);
            for id in &ids {
                if positions.contains_key(id) {
                    continue;
                }
                let p = loop {
                    let p = random_sphere_point(&mut rng);
                    if positions.values().all(|q| q.distance(&p) >= opts.min_separation) {
                        break p;
                    }
                };
                positions.insert(id.clone(), p);
            }
        }
    }
    let mut disks = BTreeMap::new();
    for d in spec.disks() {
        let c = positions[&d.center];
        let nearest = positions
            .iter()
            .filter(|(id, _)| **id != d.center)
            .map(|(_, q)| q.distance(&c))
            .fold(f64::INFINITY, f64::min);
        disks.insert(
            d.id.clone(),
            DiskState {
                center: d.center.clone(),
                radius: opts.radius_fraction * nearest.min(std::f64::consts::PI),
            },
        );
    }
    let config = MarkedConfiguration {
        anchors: spec.anchors.clone(),
        positions,
        disks,
    };
    config.check()?;
    Ok(config)
}

impl MarkedConfiguration {
    pub fn position(&self, id: &MarkedId) -> Result<&Point, EngineError> {
        self.positions.get(id).ok_or_else(|| EngineError::MissingPosition(id.clone()))
    }

    /// Ids of positioned points that are not disk centers.
    pub fn point_ids(&self) -> Vec<&MarkedId> {
        self.positions
            .keys()
            .filter(|id| !self.disks.values().any(|d| &d.center == *id))
            .collect()
    }

    pub fn check(&self) -> Result<(), EngineError> {
        let a = &self.anchors;
        let expect = [
            (&a.zero, Point::zero()),
            (&a.one, Point::one()),
            (&a.infinity, Point::Infinity),
        ];
        for (id, want) in expect {
            if *self.position(id)? != want {
                return Err(EngineError::Argument(format!("anchor {id} is not at its normal position")));
            }
        }
        let pts: Vec<(&MarkedId, &Point)> = self.positions.iter().collect();
        for (i, (ia, pa)) in pts.iter().enumerate() {
            if !pa.is_finite_value() {
                return Err(EngineError::Degenerate(format!("{ia} has a non-finite position")));
            }
            for (ib, pb) in &pts[i + 1..] {
                if pa.distance(pb) <= 0.0 {
                    return Err(EngineError::Argument(format!("{ia} and {ib} share a position")));
                }
            }
        }
        for (id, d) in &self.disks {
            if !(d.radius > 0.0) {
                return Err(EngineError::Argument(format!("disk {id} has non-positive radius")));
            }
        }
        let stats = bounded_geometry_stats(self);
        if stats.min_point_disk_dist <= 0.0 || stats.min_disk_disk_dist <= 0.0 {
            return Err(EngineError::Argument("disk closures are not disjoint".into()));
        }
        Ok(())
    }

    /// Applies the Möbius map returning the anchors to `0, 1, ∞`.
    pub fn normalize(&self) -> Result<MarkedConfiguration, EngineError> {
        let a = &self.anchors;
        let m = Mobius::normalizing(self.position(&a.zero)?, self.position(&a.one)?, self.position(&a.infinity)?)
            .ok_or_else(|| EngineError::Degenerate("anchors collide".into()))?;
        Ok(self.transformed(&m))
    }

    /// Image under `m`, with disk radii re-measured from boundary samples.
    pub fn transformed(&self, m: &Mobius<f64>) -> MarkedConfiguration {
        let mut positions: BTreeMap<MarkedId, Point> =
            self.positions.iter().map(|(id, p)| (id.clone(), m.apply(p))).collect();
        for (id, want) in [
            (&self.anchors.zero, Point::zero()),
            (&self.anchors.one, Point::one()),
            (&self.anchors.infinity, Point::Infinity),
        ] {
            if let Some(p) = positions.get_mut(id) {
                if p.distance(&want) < 1e-14 {
                    *p = want;
                }
            }
        }
        let disks = self
            .disks
            .iter()
            .map(|(id, d)| {
                let c = self.positions[&d.center];
                let new_c = positions[&d.center];
                let radius = cap_boundary(&c, d.radius, 8)
                    .iter()
                    .map(|b| m.apply(b).distance(&new_c))
                    .fold(f64::INFINITY, f64::min);
                (
                    id.clone(),
                    DiskState {
                        center: d.center.clone(),
                        radius,
                    },
                )
            })
            .collect();
        MarkedConfiguration {
            anchors: self.anchors.clone(),
            positions,
            disks,
        }
    }
}

/// Pullback update of the disk radii: `r ← r·|μ|^(-1/k)` for a cycle of period `k`
/// and multiplier `μ`, capped at a third of the distance to the nearest other point.
pub fn update_disk_radii(config: &mut MarkedConfiguration, spec: &CoveringSpec) {
    for cycle in &spec.disk_cycles {
        let growth = cycle.multiplier.abs().powf(-1.0 / cycle.period.max(1) as f64);
        for disk in &cycle.disks {
            let (Some(state), Some(c)) = (config.disks.get(&disk.id), config.positions.get(&disk.center)) else {
                continue;
            };
            let cap = config
                .positions
                .iter()
                .filter(|(id, _)| **id != disk.center)
                .map(|(_, q)| q.distance(c))
                .fold(f64::INFINITY, f64::min)
                / 3.0;
            let r = (state.radius * growth).min(cap);
            if let Some(state) = config.disks.get_mut(&disk.id) {
                state.radius = r;
            }
        }
    }
}

/// `k` points on the boundary of the spherical cap of angular radius `r` about `c`.
pub fn cap_boundary(c: &Point, r: f64, k: usize) -> Vec<Point> {
    let v = c.to_unit_vector();
    // orthonormal frame (e1, e2) perpendicular to v
    let helper = if v[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let dot = helper.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
    let mut e1 = [helper[0] - dot * v[0], helper[1] - dot * v[1], helper[2] - dot * v[2]];
    let n1 = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
    e1.iter_mut().for_each(|x| *x /= n1);
    let e2 = [
        v[1] * e1[2] - v[2] * e1[1],
        v[2] * e1[0] - v[0] * e1[2],
        v[0] * e1[1] - v[1] * e1[0],
    ];
    (0..k)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / k as f64;
            let (s, co) = (r.sin(), r.cos());
            let w: [f64; 3] = std::array::from_fn(|i| co * v[i] + s * (t.cos() * e1[i] + t.sin() * e2[i]));
            SpherePoint::from_unit_vector(w)
        })
        .collect()
}

/// The four separation minima of bounded geometry, in the spherical metric.
///
/// Disk statistics are `+∞` when there are no disks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedGeometryStats {
    #[serde(serialize_with = "extended_f64")]
    pub min_pair_dist: f64,
    #[serde(serialize_with = "extended_f64")]
    pub min_point_disk_dist: f64,
    #[serde(serialize_with = "extended_f64")]
    pub min_disk_disk_dist: f64,
    #[serde(serialize_with = "extended_f64")]
    pub min_inradius: f64,
    #[serde(serialize_with = "extended_f64")]
    pub b_star: f64,
}

impl BoundedGeometryStats {
    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("min_pair_dist", self.min_pair_dist),
            ("min_point_disk_dist", self.min_point_disk_dist),
            ("min_disk_disk_dist", self.min_disk_disk_dist),
            ("min_inradius", self.min_inradius),
            ("b_star", self.b_star),
        ]
    }
}

pub fn bounded_geometry_stats(config: &MarkedConfiguration) -> BoundedGeometryStats {
    let points: Vec<&Point> = config.point_ids().into_iter().map(|id| &config.positions[id]).collect();
    let disks: Vec<(&Point, f64)> = config
        .disks
        .values()
        .map(|d| (&config.positions[&d.center], d.radius))
        .collect();
    let mut min_pair = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            min_pair = min_pair.min(p.distance(q));
        }
    }
    let mut min_point_disk = f64::INFINITY;
    for p in &points {
        for (c, r) in &disks {
            min_point_disk = min_point_disk.min(p.distance(c) - r);
        }
    }
    let mut min_disk_disk = f64::INFINITY;
    for (i, (c1, r1)) in disks.iter().enumerate() {
        for (c2, r2) in &disks[i + 1..] {
            min_disk_disk = min_disk_disk.min(c1.distance(c2) - r1 - r2);
        }
    }
    let min_inradius = disks.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
    let b_star = min_pair.min(min_point_disk).min(min_disk_disk).min(min_inradius);
    BoundedGeometryStats {
        min_pair_dist: min_pair,
        min_point_disk_dist: min_point_disk,
        min_disk_disk_dist: min_disk_disk,
        min_inradius,
        b_star,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::canned;

    fn explicit(pairs: &[(&str, Point)]) -> Placement {
        Placement::Explicit(pairs.iter().map(|(k, p)| (MarkedId::from(*k), *p)).collect())
    }

    #[test]
    fn explicit_placement_is_verbatim() {
        let spec = canned("misiurewicz_i").unwrap();
        let place = explicit(&[
            ("c0", Point::zero()),
            ("v1", Point::one()),
            ("inf", Point::Infinity),
            ("v2", Point::new(1.0, 1.0)),
            ("v3", Point::new(-1.0, 0.0)),
        ]);
        let c = initialize_configuration(&spec, &place, &InitOptions::default()).unwrap();
        assert_eq!(c.positions[&MarkedId::from("v2")], Point::new(1.0, 1.0));
        assert_eq!(c.normalize().unwrap(), c);
    }

    #[test]
    fn duplicate_positions_are_rejected() {
        let spec = canned("misiurewicz_i").unwrap();
        let place = explicit(&[
            ("c0", Point::zero()),
            ("v1", Point::one()),
            ("inf", Point::Infinity),
            ("v2", Point::new(1.0, 1.0)),
            ("v3", Point::new(1.0, 1.0)),
        ]);
        assert!(matches!(
            initialize_configuration(&spec, &place, &InitOptions::default()),
            Err(EngineError::Argument(_))
        ));
    }

    #[test]
    fn seeded_placement_is_deterministic() {
        let spec = canned("subhyp_disk").unwrap();
        let a = initialize_configuration(&spec, &Placement::Seed(3), &InitOptions::default()).unwrap();
        let b = initialize_configuration(&spec, &Placement::Seed(3), &InitOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.disks.len(), 2);
        let s = bounded_geometry_stats(&a);
        assert!(s.b_star > 0.0 && s.b_star <= s.min_inradius);
    }

    #[test]
    fn pair_distance_example() {
        let spec = canned("doubling").unwrap();
        let t = 0.3f64;
        // point on the unit circle's great circle at angle 0.3 from 1
        let a = Point::from_unit_vector([t.cos(), t.sin(), 0.0]);
        let place = explicit(&[
            ("z0", Point::zero()),
            ("z1", Point::one()),
            ("zinf", Point::Infinity),
            ("a", a),
        ]);
        let c = initialize_configuration(&spec, &place, &InitOptions::default()).unwrap();
        let s = bounded_geometry_stats(&c);
        assert!((s.min_pair_dist - 0.3).abs() < 1e-12);
        assert_eq!(s.min_inradius, f64::INFINITY);
        assert_eq!(s.b_star, s.min_pair_dist);
    }

    #[test]
    fn radii_grow_to_the_cap() {
        let spec = canned("subhyp_disk").unwrap();
        let mut c = initialize_configuration(&spec, &Placement::Seed(9), &InitOptions::default()).unwrap();
        let before = c.disks.clone();
        update_disk_radii(&mut c, &spec);
        for (id, d) in &c.disks {
            assert!(d.radius >= before[id].radius);
        }
        assert!(c.check().is_ok());
    }

    #[test]
    fn cap_boundary_is_at_radius() {
        let c = Point::new(0.4, -1.2);
        for b in cap_boundary(&c, 0.2, 6) {
            assert!((b.distance(&c) - 0.2).abs() < 1e-12);
        }
    }
}
