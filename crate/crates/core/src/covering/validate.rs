use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::spec::{CoveringSpec, CurveId, CycleKind, MarkedId, PullbackTarget};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Degree { degree: u32 },
    TooFewPoints { count: usize },
    MissingAnchor { id: MarkedId },
    RepeatedAnchor { id: MarkedId },
    DuplicateMarked { id: MarkedId },
    DuplicateCurve { id: CurveId },
    UnknownMarked { curve: CurveId, id: MarkedId },
    Peripheral { curve: CurveId, side: usize, size: usize },
    SidesOverlap { curve: CurveId, id: MarkedId },
    SidesIncomplete { curve: CurveId, id: MarkedId },
    MissingPullback { curve: CurveId },
    StrayPullback { curve: CurveId },
    UnknownTarget { curve: CurveId, target: CurveId },
    ComponentDegree { curve: CurveId, degree: u32 },
    DegreeSum { curve: CurveId, sum: u32, degree: u32 },
    ParabolicCycle { cycle: usize },
    Multiplier { cycle: usize, multiplier: f64 },
    Period { cycle: usize, period: usize, disks: usize },
    RingAxiom { disk: MarkedId, axiom: String },
    PortraitUnknown { id: MarkedId },
    PortraitDuplicate { id: MarkedId },
    PortraitSuccessor { id: MarkedId, successor: MarkedId },
    LocalDegree { id: MarkedId },
    NoCriticalPoint,
    Angle { angle: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            Degree { degree } => write!(f, "degree {degree} must be at least 2"),
            TooFewPoints { count } => write!(f, "P1 has {count} points, need at least 3"),
            MissingAnchor { id } => write!(f, "anchor {id} is not a P1 point"),
            RepeatedAnchor { id } => write!(f, "anchor {id} is used twice"),
            DuplicateMarked { id } => write!(f, "marked id {id} is declared twice"),
            DuplicateCurve { id } => write!(f, "curve id {id} is declared twice"),
            UnknownMarked { curve, id } => write!(f, "curve {curve}: unknown marked object {id}"),
            Peripheral { curve, side, size } => {
                write!(f, "curve {curve}: side {side} has {size} marked object(s); non-peripheral curves need 2")
            }
            SidesOverlap { curve, id } => write!(f, "curve {curve}: {id} lies on both sides"),
            SidesIncomplete { curve, id } => write!(f, "curve {curve}: {id} lies on neither side"),
            MissingPullback { curve } => write!(f, "curve {curve} has no pullback entry"),
            StrayPullback { curve } => write!(f, "pullback entry for undeclared curve {curve}"),
            UnknownTarget { curve, target } => write!(f, "curve {curve}: pullback target {target} is not in the universe"),
            ComponentDegree { curve, degree } => write!(f, "curve {curve}: component degree {degree} is not positive"),
            DegreeSum { curve, sum, degree } => {
                write!(f, "curve {curve}: preimage degrees sum to {sum}, expected {degree}")
            }
            ParabolicCycle { cycle } => write!(f, "disk cycle {cycle} is parabolic; only attracting cycles are allowed"),
            Multiplier { cycle, multiplier } => write!(f, "disk cycle {cycle}: multiplier {multiplier} does not match its kind"),
            Period { cycle, period, disks } => write!(f, "disk cycle {cycle}: period {period} but {disks} disk(s)"),
            RingAxiom { disk, axiom } => write!(f, "disk {disk}: shielding ring fails `{axiom}`"),
            PortraitUnknown { id } => write!(f, "portrait point {id} is not a marked point"),
            PortraitDuplicate { id } => write!(f, "portrait point {id} is listed twice"),
            PortraitSuccessor { id, successor } => write!(f, "portrait point {id}: successor {successor} is not in the portrait"),
            LocalDegree { id } => write!(f, "portrait point {id}: local degree must be at least 1"),
            NoCriticalPoint => write!(f, "portrait has no point of local degree 2 or more"),
            Angle { angle } => write!(f, "external angle {angle:?} is not a rational in [0, 1)"),
        }
    }
}

/// Every problem found in `spec`; an empty list means the spec is valid.
pub fn validate_spec(spec: &CoveringSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    if spec.degree < 2 {
        out.push(Violation::Degree { degree: spec.degree });
    }
    if spec.p1_points.len() < 3 {
        out.push(Violation::TooFewPoints {
            count: spec.p1_points.len(),
        });
    }
    let mut anchors = BTreeSet::new();
    for id in spec.anchors.ids() {
        if !spec.p1_points.contains(id) {
            out.push(Violation::MissingAnchor { id: id.clone() });
        }
        if !anchors.insert(id) {
            out.push(Violation::RepeatedAnchor { id: id.clone() });
        }
    }

    let mut seen = BTreeSet::new();
    let all_ids = spec
        .marked_objects()
        .into_iter()
        .chain(spec.disks().flat_map(|d| [d.center.clone(), d.boundary.clone()]));
    for id in all_ids {
        if !seen.insert(id.clone()) {
            out.push(Violation::DuplicateMarked { id });
        }
    }

    check_curves(spec, &mut out);
    check_pullback(spec, &mut out);
    check_disks(spec, &mut out);
    check_portrait(spec, &mut out);
    out
}

fn check_curves(spec: &CoveringSpec, out: &mut Vec<Violation>) {
    let objects: BTreeSet<MarkedId> = spec.marked_objects().into_iter().collect();
    let mut ids = BTreeSet::new();
    for c in &spec.curves {
        if !ids.insert(&c.id) {
            out.push(Violation::DuplicateCurve { id: c.id.clone() });
        }
        let mut covered = BTreeSet::new();
        for (k, side) in c.sides.iter().enumerate() {
            if side.len() < 2 {
                out.push(Violation::Peripheral {
                    curve: c.id.clone(),
                    side: k,
                    size: side.len(),
                });
            }
            for id in side {
                if !objects.contains(id) {
                    out.push(Violation::UnknownMarked {
                        curve: c.id.clone(),
                        id: id.clone(),
                    });
                } else if !covered.insert(id) {
                    out.push(Violation::SidesOverlap {
                        curve: c.id.clone(),
                        id: id.clone(),
                    });
                }
            }
        }
        for id in objects.iter().filter(|id| !covered.contains(id)) {
            out.push(Violation::SidesIncomplete {
                curve: c.id.clone(),
                id: id.clone(),
            });
        }
    }
}

fn check_pullback(spec: &CoveringSpec, out: &mut Vec<Violation>) {
    for c in &spec.curves {
        let Some(components) = spec.pullback.get(&c.id) else {
            out.push(Violation::MissingPullback { curve: c.id.clone() });
            continue;
        };
        let mut sum = 0;
        for comp in components {
            if comp.degree == 0 {
                out.push(Violation::ComponentDegree {
                    curve: c.id.clone(),
                    degree: comp.degree,
                });
            }
            sum += comp.degree;
            if let PullbackTarget::Curve(t) = &comp.target {
                if spec.curve(t).is_none() {
                    out.push(Violation::UnknownTarget {
                        curve: c.id.clone(),
                        target: t.clone(),
                    });
                }
            }
        }
        if sum != spec.degree {
            out.push(Violation::DegreeSum {
                curve: c.id.clone(),
                sum,
                degree: spec.degree,
            });
        }
    }
    for id in spec.pullback.keys() {
        if spec.curve(id).is_none() {
            out.push(Violation::StrayPullback { curve: id.clone() });
        }
    }
}

fn check_disks(spec: &CoveringSpec, out: &mut Vec<Violation>) {
    for (k, cycle) in spec.disk_cycles.iter().enumerate() {
        let multiplier_ok = match cycle.kind {
            CycleKind::Parabolic => {
                out.push(Violation::ParabolicCycle { cycle: k });
                true
            }
            CycleKind::Superattracting => cycle.multiplier == 0.0,
            CycleKind::Attracting => cycle.multiplier > 0.0 && cycle.multiplier < 1.0,
        };
        if !multiplier_ok {
            out.push(Violation::Multiplier {
                cycle: k,
                multiplier: cycle.multiplier,
            });
        }
        if cycle.period == 0 || cycle.period != cycle.disks.len() {
            out.push(Violation::Period {
                cycle: k,
                period: cycle.period,
                disks: cycle.disks.len(),
            });
        }
        for disk in &cycle.disks {
            let r = &disk.ring;
            let axioms = [
                ("avoids_postcritical", r.avoids_postcritical),
                ("abuts_disk", r.abuts_disk),
                ("closures_disjoint", r.closures_disjoint),
                ("holomorphic", r.holomorphic),
                ("maps_into_next_disk", r.maps_into_next_disk),
            ];
            for (name, ok) in axioms {
                if !ok {
                    out.push(Violation::RingAxiom {
                        disk: disk.id.clone(),
                        axiom: name.into(),
                    });
                }
            }
        }
    }
}

fn check_portrait(spec: &CoveringSpec, out: &mut Vec<Violation>) {
    let Some(portrait) = &spec.portrait else {
        return;
    };
    let known: BTreeSet<MarkedId> = spec.e_points().into_iter().collect();
    let mut ids = BTreeSet::new();
    for p in &portrait.points {
        if !known.contains(&p.id) {
            out.push(Violation::PortraitUnknown { id: p.id.clone() });
        }
        if !ids.insert(&p.id) {
            out.push(Violation::PortraitDuplicate { id: p.id.clone() });
        }
        if p.local_degree == 0 {
            out.push(Violation::LocalDegree { id: p.id.clone() });
        }
    }
    for p in &portrait.points {
        if !ids.contains(&p.successor) {
            out.push(Violation::PortraitSuccessor {
                id: p.id.clone(),
                successor: p.successor.clone(),
            });
        }
    }
    for id in &portrait.superattracting {
        if !ids.contains(id) {
            out.push(Violation::PortraitUnknown { id: id.clone() });
        }
    }
    if portrait.points.iter().all(|p| p.local_degree < 2) {
        out.push(Violation::NoCriticalPoint);
    }
    if let Some(a) = &portrait.angle {
        let ok = portrait
            .angle()
            .is_some_and(|r| r >= crate::ratio(0, 1) && r < crate::ratio(1, 1));
        if !ok {
            out.push(Violation::Angle { angle: a.clone() });
        }
    }
}
