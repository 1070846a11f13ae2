//! Pullback iteration runs and their verdicts.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::config::{bounded_geometry_stats, update_disk_radii, BoundedGeometryStats, MarkedConfiguration};
use super::lengths::{scan_lengths, LengthEstimate, Marking};
use super::sphere::Mobius;
use super::spider::{displacement, SpiderState};
use crate::covering::{CoveringSpec, CurveId, MarkedId};
use crate::error::EngineError;
use crate::format::extended_f64;
use crate::Point;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunParams {
    pub iterations: usize,
    /// Bounded-geometry constant.
    pub b: f64,
    pub conv_tol: f64,
    pub obs_tol: f64,
    /// Length of the trailing window used by the verdict rules.
    pub window: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            iterations: 100,
            b: 1e-3,
            conv_tol: 1e-10,
            obs_tol: 1e-3,
            window: 10,
        }
    }
}

impl RunParams {
    pub fn check(&self) -> Result<(), EngineError> {
        if self.iterations == 0 {
            return Err(EngineError::Config("iterations must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(EngineError::Config("window must be at least 1".into()));
        }
        for (name, v) in [("b", self.b), ("conv_tol", self.conv_tol), ("obs_tol", self.obs_tol)] {
            if !(v > 0.0) {
                return Err(EngineError::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converging,
    Obstructed,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthSummary {
    #[serde(serialize_with = "extended_f64")]
    pub mod_lower: f64,
    #[serde(serialize_with = "extended_f64")]
    pub length_upper: f64,
    #[serde(serialize_with = "extended_f64")]
    pub w: f64,
}

impl From<&LengthEstimate> for LengthSummary {
    fn from(e: &LengthEstimate) -> Self {
        Self {
            mod_lower: e.mod_lower,
            length_upper: e.length_upper,
            w: e.w,
        }
    }
}

impl LengthSummary {
    pub fn from_w(w: f64) -> Self {
        let length_upper = (-w).exp();
        Self {
            mod_lower: std::f64::consts::PI / length_upper,
            length_upper,
            w,
        }
    }
}

/// One iteration. For spider runs record `n` holds `x_{n+1}`; for oracles it is the oracle's `n`-th entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub n: usize,
    pub positions: BTreeMap<MarkedId, Point>,
    pub radii: BTreeMap<MarkedId, f64>,
    pub bg_stats: Option<BoundedGeometryStats>,
    /// `E`-marking bounds; ids starting with `~` are unmatched clusters.
    pub lengths: BTreeMap<CurveId, LengthSummary>,
    /// `Q`-marking bounds.
    pub lengths_q: BTreeMap<CurveId, LengthSummary>,
    #[serde(serialize_with = "extended_f64")]
    pub step_disp: f64,
    #[serde(rename = "dT_est")]
    pub dt_est: Option<f64>,
    /// Quadratic parameter of the spider model.
    pub parameter: Option<[f64; 2]>,
}

impl IterationRecord {
    /// `w` of the universe curves.
    pub fn w_snapshot(&self) -> BTreeMap<CurveId, f64> {
        self.lengths
            .iter()
            .filter(|(id, _)| !id.as_str().starts_with('~'))
            .map(|(id, l)| (id.clone(), l.w))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationTrace {
    pub spec: String,
    pub source: String,
    pub records: Vec<IterationRecord>,
    pub verdict: Verdict,
    /// Curves whose lengths fell below the obstruction tolerance.
    pub flagged: Vec<CurveId>,
    /// Error that ended the run early.
    pub terminated: Option<String>,
}

impl IterationTrace {
    pub fn parameter(&self) -> Option<Complex64> {
        self.records
            .last()
            .and_then(|r| r.parameter)
            .map(|[re, im]| Complex64::new(re, im))
    }
}

/// Half the largest change of `log|cr|` or `log|1 - cr|` over marked quadruples.
pub fn dt_estimate(a: &MarkedConfiguration, b: &MarkedConfiguration) -> f64 {
    let ids: Vec<&MarkedId> = a.positions.keys().filter(|id| b.positions.contains_key(*id)).collect();
    let n = ids.len();
    let logs = |c: &MarkedConfiguration, q: [usize; 4]| -> Option<[f64; 2]> {
        let p = q.map(|k| c.positions[ids[k]]);
        let cr = Mobius::normalizing(&p[2], &p[1], &p[3])?.apply(&p[0]).finite()?;
        Some([cr.norm().ln(), (1.0 - cr).norm().ln()])
    };
    let mut best = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    for q in [[i, j, k, l], [i, k, j, l], [i, l, j, k]] {
                        if let (Some(x), Some(y)) = (logs(a, q), logs(b, q)) {
                            for t in 0..2 {
                                let d = (x[t] - y[t]).abs();
                                if d.is_finite() {
                                    best = best.max(d);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    best / 2.0
}

fn record_for(
    n: usize,
    config: &MarkedConfiguration,
    spec: &CoveringSpec,
    step_disp: f64,
    dt_est: f64,
    parameter: Complex64,
) -> IterationRecord {
    let summarize = |marking| {
        scan_lengths(config, spec, marking)
            .iter()
            .map(|e| (e.curve.clone(), LengthSummary::from(e)))
            .collect()
    };
    IterationRecord {
        n,
        positions: config.positions.clone(),
        radii: config.disks.iter().map(|(id, d)| (id.clone(), d.radius)).collect(),
        bg_stats: Some(bounded_geometry_stats(config)),
        lengths: summarize(Marking::E),
        lengths_q: summarize(Marking::Q),
        step_disp,
        dt_est: Some(dt_est),
        parameter: Some([parameter.re, parameter.im]),
    }
}

/// Iterates the spider from `x0` and classifies the result.
pub fn run_iteration(
    spec: &CoveringSpec,
    x0: &MarkedConfiguration,
    params: &RunParams,
) -> Result<IterationTrace, EngineError> {
    params.check()?;
    let mut state = SpiderState::new(spec, x0)?;
    let mut current = x0.clone();
    let mut records = Vec::with_capacity(params.iterations);
    let mut terminated = None;
    for n in 0..params.iterations {
        if let Err(e) = state.step() {
            terminated = Some(e.to_string());
            break;
        }
        let mut next = state.configuration(&current);
        update_disk_radii(&mut next, spec);
        let disp = displacement(&current, &next);
        let dt = dt_estimate(&current, &next);
        records.push(record_for(n, &next, spec, disp, dt, state.parameter()));
        current = next;
    }
    let (verdict, flagged) = if terminated.is_some() {
        (Verdict::Undecided, vec![])
    } else {
        classify(&records, params)
    };
    Ok(IterationTrace {
        spec: spec.name.clone(),
        source: "spider".into(),
        records,
        verdict,
        flagged,
        terminated,
    })
}

/// A synthetic `w`-trace standing in for the iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct WOracle {
    pub label: String,
    pub records: Vec<BTreeMap<CurveId, f64>>,
}

/// Wraps an oracle as a trace. Step displacement is the largest change of `w`.
pub fn run_oracle(spec: &CoveringSpec, oracle: &WOracle, params: &RunParams) -> Result<IterationTrace, EngineError> {
    params.check()?;
    let mut records = Vec::with_capacity(oracle.records.len());
    for (n, w) in oracle.records.iter().enumerate() {
        for id in w.keys() {
            if spec.curve(id).is_none() {
                return Err(EngineError::Spec(crate::SpecError::UnknownCurve(id.clone())));
            }
        }
        let step_disp = match n {
            0 => 0.0,
            _ => w
                .iter()
                .map(|(id, x)| oracle.records[n - 1].get(id).map_or(f64::INFINITY, |y| (x - y).abs()))
                .fold(0.0, f64::max),
        };
        records.push(IterationRecord {
            n,
            positions: BTreeMap::new(),
            radii: BTreeMap::new(),
            bg_stats: None,
            lengths: w.iter().map(|(id, &x)| (id.clone(), LengthSummary::from_w(x))).collect(),
            lengths_q: BTreeMap::new(),
            step_disp,
            dt_est: None,
            parameter: None,
        });
    }
    let (verdict, flagged) = classify(&records, params);
    Ok(IterationTrace {
        spec: spec.name.clone(),
        source: format!("oracle:{}", oracle.label),
        records,
        verdict,
        flagged,
        terminated: None,
    })
}

/// Obstructed if a universe curve ends below `obs_tol` with lengths non-increasing over the
/// trailing window; converging if the window has small steps and bounded geometry.
pub fn classify(records: &[IterationRecord], params: &RunParams) -> (Verdict, Vec<CurveId>) {
    if records.len() < params.window {
        return (Verdict::Undecided, vec![]);
    }
    let tail = &records[records.len() - params.window..];
    let last = &tail[tail.len() - 1];
    let flagged: Vec<CurveId> = last
        .w_snapshot()
        .keys()
        .filter(|id| {
            let series: Option<Vec<f64>> = tail.iter().map(|r| r.lengths.get(*id).map(|l| l.length_upper)).collect();
            series.is_some_and(|s| s[s.len() - 1] < params.obs_tol && s.windows(2).all(|p| p[1] <= p[0]))
        })
        .cloned()
        .collect();
    if !flagged.is_empty() {
        return (Verdict::Obstructed, flagged);
    }
    let steady = tail.iter().all(|r| r.step_disp < params.conv_tol);
    let bounded = tail
        .iter()
        .all(|r| r.bg_stats.as_ref().is_none_or(|s| s.b_star >= params.b));
    if steady && bounded {
        (Verdict::Converging, vec![])
    } else {
        (Verdict::Undecided, vec![])
    }
}
