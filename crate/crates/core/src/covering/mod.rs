//! Combinatorial data of a branched covering.

mod canned;
mod closure;
mod orbifold;
mod spec;
mod validate;

pub use canned::{canned, canned_examples, canned_names, OBSTRUCTED};
pub use closure::pullback_closure;
pub use orbifold::{orbifold_characteristic, Nu, Orbifold, OrbifoldClass};
pub use spec::{
    Anchors, Component, CoveringSpec, CriticalPortrait, CurveClass, CurveId, CycleKind, Disk, DiskCycle, MarkedId,
    PortraitPoint, PullbackTarget, RingFlags, FORMAT_VERSION,
};
pub use validate::{validate_spec, Violation};
