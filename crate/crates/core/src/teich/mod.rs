//! Pullback iteration on marked configurations and canonical obstruction extraction.

pub mod canonical;
pub mod config;
pub mod constants;
pub mod gamma;
pub mod geometry;
pub mod inequalities;
pub mod iteration;
pub mod lengths;
pub mod monitors;
pub mod sphere;
pub mod spider;

pub use canonical::{canonical_obstruction, ExtractOptions, ObstructionReport, WSeries};
pub use config::{
    bounded_geometry_stats, initialize_configuration, BoundedGeometryStats, DiskState, InitOptions,
    MarkedConfiguration, Placement,
};
pub use constants::{compute_constants, ConstantParams, PaperConstants};
pub use gamma::gamma_j_extract;
pub use inequalities::quasi_nondecreasing;
pub use iteration::{run_iteration, IterationRecord, IterationTrace, RunParams, Verdict};
pub use lengths::{short_curve_scan, LengthEstimate, Marking};
pub use monitors::{inequality_monitors, MonitorReport};
pub use sphere::{cross_ratio, Mobius, SpherePoint};
pub use spider::{pullback_step, SpiderModel, SpiderState, StepDiagnostics};
