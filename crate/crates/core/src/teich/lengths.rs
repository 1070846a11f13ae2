//! Curve-length upper bounds from round annuli.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::Serialize;

use super::config::{cap_boundary, MarkedConfiguration};
use super::geometry::separating_modulus;
use crate::covering::{CoveringSpec, CurveId, MarkedId};
use crate::format::extended_f64;
use crate::Point;

/// Boundary samples per disk when disks are treated as solid marked sets.
pub const Q_DISK_SAMPLES: usize = 16;

/// Which marked set the lengths are measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Marking {
    /// `P₁` plus a center and one boundary point per disk.
    E,
    /// `P₁` plus the closed disks.
    Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthEstimate {
    pub curve: CurveId,
    /// Candidate with no matching curve in the universe.
    pub provisional: bool,
    /// The side the annulus was built around.
    pub side: Vec<MarkedId>,
    #[serde(serialize_with = "extended_f64")]
    pub mod_lower: f64,
    #[serde(serialize_with = "extended_f64")]
    pub length_upper: f64,
    #[serde(serialize_with = "extended_f64")]
    pub w: f64,
}

impl LengthEstimate {
    pub fn from_modulus(curve: CurveId, provisional: bool, side: Vec<MarkedId>, modulus: f64) -> Self {
        let length_upper = PI / modulus;
        Self {
            curve,
            provisional,
            side,
            mod_lower: modulus,
            length_upper,
            w: -length_upper.ln(),
        }
    }
}

/// Marked objects with the sphere points that represent them.
pub fn marked_objects(config: &MarkedConfiguration, spec: &CoveringSpec, marking: Marking) -> Vec<(MarkedId, Vec<Point>)> {
    let mut out: Vec<(MarkedId, Vec<Point>)> = spec
        .p1_points
        .iter()
        .filter_map(|id| config.positions.get(id).map(|p| (id.clone(), vec![*p])))
        .collect();
    for disk in spec.disks() {
        let (Some(state), Some(c)) = (config.disks.get(&disk.id), config.positions.get(&disk.center)) else {
            continue;
        };
        let samples = match marking {
            Marking::E => 1,
            Marking::Q => Q_DISK_SAMPLES,
        };
        let mut pts = vec![*c];
        pts.extend(cap_boundary(c, state.radius, samples));
        out.push((disk.id.clone(), pts));
    }
    out
}

/// Clusters of the single-linkage dendrogram with between 2 and `n - 2` members.
pub fn single_linkage_clusters(objects: &[(MarkedId, Vec<Point>)]) -> Vec<BTreeSet<MarkedId>> {
    let n = objects.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = objects[i]
                .1
                .iter()
                .flat_map(|p| objects[j].1.iter().map(move |q| p.distance(q)))
                .fold(f64::INFINITY, f64::min);
            pairs.push((d, i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut label: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        let (li, lj) = (label[i], label[j]);
        if li == lj {
            continue;
        }
        for l in label.iter_mut() {
            if *l == lj {
                *l = li;
            }
        }
        let members: BTreeSet<MarkedId> = (0..n).filter(|&k| label[k] == li).map(|k| objects[k].0.clone()).collect();
        if members.len() >= 2 && members.len() + 2 <= n {
            out.push(members);
        }
    }
    out
}

fn points_of(objects: &[(MarkedId, Vec<Point>)], side: &BTreeSet<MarkedId>, inside: bool) -> Vec<Point> {
    objects
        .iter()
        .filter(|(id, _)| side.contains(id) == inside)
        .flat_map(|(_, pts)| pts.iter().copied())
        .collect()
}

fn estimate(objects: &[(MarkedId, Vec<Point>)], side: &BTreeSet<MarkedId>) -> f64 {
    let a = points_of(objects, side, true);
    let b = points_of(objects, side, false);
    separating_modulus(&a, &b).max(separating_modulus(&b, &a))
}

/// Length bounds for every universe curve and every unmatched cluster.
pub fn scan_lengths(config: &MarkedConfiguration, spec: &CoveringSpec, marking: Marking) -> Vec<LengthEstimate> {
    let objects = marked_objects(config, spec, marking);
    let mut out = Vec::new();
    let mut labels: Vec<BTreeSet<MarkedId>> = Vec::new();
    for curve in &spec.curves {
        let side: BTreeSet<MarkedId> = curve.sides[0].iter().cloned().collect();
        let other: BTreeSet<MarkedId> = curve.sides[1].iter().cloned().collect();
        let m = estimate(&objects, &side);
        out.push(LengthEstimate::from_modulus(curve.id.clone(), false, curve.sides[0].clone(), m));
        labels.push(side);
        labels.push(other);
    }
    let mut seen = BTreeSet::new();
    for cluster in single_linkage_clusters(&objects) {
        if labels.contains(&cluster) || !seen.insert(cluster.clone()) {
            continue;
        }
        let name: Vec<&str> = cluster.iter().map(MarkedId::as_str).collect();
        let id = CurveId(format!("~{}", name.join("+")));
        let m = estimate(&objects, &cluster);
        out.push(LengthEstimate::from_modulus(id, true, cluster.into_iter().collect(), m));
    }
    out.sort_by(|a, b| a.curve.cmp(&b.curve));
    out
}

/// Length bounds in the `E` marking with `w ≥ w_floor`.
pub fn short_curve_scan(config: &MarkedConfiguration, spec: &CoveringSpec, w_floor: f64) -> Vec<LengthEstimate> {
    scan_lengths(config, spec, Marking::E)
        .into_iter()
        .filter(|e| e.w >= w_floor)
        .collect()
}
