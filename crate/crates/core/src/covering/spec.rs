use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SpecError;
use crate::scalar::parse_rational;
use crate::Rational;

pub const FORMAT_VERSION: u32 = 1;

macro_rules! string_id {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
    };
}

string_id!(CurveId);
string_id!(MarkedId);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchors {
    pub zero: MarkedId,
    pub one: MarkedId,
    pub infinity: MarkedId,
}

impl Anchors {
    pub fn ids(&self) -> [&MarkedId; 3] {
        [&self.zero, &self.one, &self.infinity]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    Attracting,
    Superattracting,
    /// Accepted by the parser so validation can name it; never valid.
    Parabolic,
}

/// Declared shielding-ring axioms for one disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFlags {
    pub avoids_postcritical: bool,
    pub abuts_disk: bool,
    pub closures_disjoint: bool,
    pub holomorphic: bool,
    pub maps_into_next_disk: bool,
}

impl RingFlags {
    pub const ALL: RingFlags = RingFlags {
        avoids_postcritical: true,
        abuts_disk: true,
        closures_disjoint: true,
        holomorphic: true,
        maps_into_next_disk: true,
    };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub id: MarkedId,
    pub center: MarkedId,
    pub boundary: MarkedId,
    pub ring: RingFlags,
}

/// Disks listed in cycle order: `disks[k]` maps into `disks[k + 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskCycle {
    pub kind: CycleKind,
    /// Absolute value of the cycle multiplier.
    pub multiplier: f64,
    pub period: usize,
    pub disks: Vec<Disk>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveClass {
    pub id: CurveId,
    pub sides: [Vec<MarkedId>; 2],
}

impl CurveClass {
    /// The side not containing `anchor`, sorted.
    pub fn side_without(&self, anchor: &MarkedId) -> Vec<MarkedId> {
        let mut side = if self.sides[0].contains(anchor) {
            self.sides[1].clone()
        } else {
            self.sides[0].clone()
        };
        side.sort();
        side
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum PullbackTarget {
    Curve(CurveId),
    Peripheral,
    Trivial,
}

impl PullbackTarget {
    pub fn curve(&self) -> Option<&CurveId> {
        match self {
            Self::Curve(c) => Some(c),
            _ => None,
        }
    }
}

impl From<String> for PullbackTarget {
    fn from(s: String) -> Self {
        match s.as_str() {
            "peripheral" => Self::Peripheral,
            "trivial" => Self::Trivial,
            _ => Self::Curve(CurveId(s)),
        }
    }
}

impl From<PullbackTarget> for String {
    fn from(t: PullbackTarget) -> Self {
        match t {
            PullbackTarget::Curve(c) => c.0,
            PullbackTarget::Peripheral => "peripheral".into(),
            PullbackTarget::Trivial => "trivial".into(),
        }
    }
}

/// One component of `f^{-1}(γ)` and the degree of `f` on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub target: PullbackTarget,
    pub degree: u32,
}

impl Component {
    pub fn new(target: PullbackTarget, degree: u32) -> Self {
        Self { target, degree }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitPoint {
    pub id: MarkedId,
    pub successor: MarkedId,
    pub local_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPortrait {
    pub points: Vec<PortraitPoint>,
    #[serde(default)]
    pub superattracting: Vec<MarkedId>,
    /// External angle landing at the critical value, as `"p/q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<String>,
}

impl CriticalPortrait {
    pub fn point(&self, id: &MarkedId) -> Option<&PortraitPoint> {
        self.points.iter().find(|p| &p.id == id)
    }

    pub fn successor(&self, id: &MarkedId) -> Option<&MarkedId> {
        self.point(id).map(|p| &p.successor)
    }

    pub fn angle(&self) -> Option<Rational> {
        self.angle.as_deref().and_then(parse_rational)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringSpec {
    pub format: u32,
    pub name: String,
    pub degree: u32,
    pub p1_points: Vec<MarkedId>,
    pub anchors: Anchors,
    #[serde(default)]
    pub disk_cycles: Vec<DiskCycle>,
    pub curves: Vec<CurveClass>,
    pub pullback: BTreeMap<CurveId, Vec<Component>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub portrait: Option<CriticalPortrait>,
}

impl CoveringSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
        match value.get("format").and_then(|f| f.as_u64()) {
            Some(v) if v == FORMAT_VERSION as u64 => {}
            Some(v) => return Err(SpecError::Format(v as u32)),
            None => return Err(SpecError::Parse("missing `format`".into())),
        }
        serde_json::from_value(value).map_err(|e| SpecError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn disks(&self) -> impl Iterator<Item = &Disk> {
        self.disk_cycles.iter().flat_map(|c| c.disks.iter())
    }

    /// Marked objects of `Q`: the points of `P₁` followed by the disks.
    pub fn marked_objects(&self) -> Vec<MarkedId> {
        self.p1_points
            .iter()
            .cloned()
            .chain(self.disks().map(|d| d.id.clone()))
            .collect()
    }

    /// Points of `E`: `P₁` plus a center and a boundary point per disk.
    pub fn e_points(&self) -> Vec<MarkedId> {
        self.p1_points
            .iter()
            .cloned()
            .chain(self.disks().flat_map(|d| [d.center.clone(), d.boundary.clone()]))
            .collect()
    }

    /// `p = #E`.
    pub fn p(&self) -> usize {
        self.e_points().len()
    }

    pub fn universe(&self) -> Vec<CurveId> {
        self.curves.iter().map(|c| c.id.clone()).collect()
    }

    pub fn curve(&self, id: &CurveId) -> Option<&CurveClass> {
        self.curves.iter().find(|c| &c.id == id)
    }

    pub fn components(&self, id: &CurveId) -> Result<&[Component], SpecError> {
        if self.curve(id).is_none() {
            return Err(SpecError::UnknownCurve(id.clone()));
        }
        self.pullback
            .get(id)
            .map(Vec::as_slice)
            .ok_or_else(|| SpecError::MissingPullback(id.clone()))
    }

    /// Non-peripheral lifts of `id`.
    pub fn lifts(&self, id: &CurveId) -> Result<impl Iterator<Item = &CurveId>, SpecError> {
        Ok(self.components(id)?.iter().filter_map(|c| c.target.curve()))
    }

    pub fn disk_of_center(&self, center: &MarkedId) -> Option<(&DiskCycle, usize)> {
        self.disk_cycles
            .iter()
            .find_map(|c| c.disks.iter().position(|d| &d.center == center).map(|k| (c, k)))
    }
}
