//! Soft checks of the length inequalities along a trace.

use std::f64::consts::{E, PI};

use serde::Serialize;

use super::constants::{PaperConstants, LN_2_OVER_PI};
use super::inequalities::collar_log_gap;
use super::iteration::IterationTrace;
use crate::covering::{CoveringSpec, CurveId};
use crate::matrix::{build_transition_matrix, frobenius_normal_form};

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MonitorCheck {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// First few failures, as `(n, description)`.
    pub examples: Vec<(usize, String)>,
}

impl MonitorCheck {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    fn record(&mut self, n: usize, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.examples.len() < 5 {
                self.examples.push((n, what()));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonitorReport {
    pub checks: Vec<MonitorCheck>,
}

impl MonitorReport {
    pub fn check(&self, name: &str) -> Option<&MonitorCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Curve blocks of the universe with spectral radius at least one.
fn recurrent_blocks(spec: &CoveringSpec) -> Vec<Vec<CurveId>> {
    let universe = spec.universe();
    let Ok(m) = build_transition_matrix(spec, &universe) else {
        return vec![];
    };
    let Ok(f) = frobenius_normal_form(&m.entries) else {
        return vec![];
    };
    f.blocks
        .iter()
        .filter(|b| b.irreducible && b.spectral_radius.at_least_one() && b.indices.len() > 1)
        .map(|b| b.indices.iter().map(|&i| universe[i].clone()).collect())
        .collect()
}

pub fn inequality_monitors(trace: &IterationTrace, constants: &PaperConstants, spec: &CoveringSpec) -> MonitorReport {
    let p = &constants.params;
    let step = (p.degree as f64).ln() + 2.0 * p.d_est;
    let mut collar = MonitorCheck::new("collar");
    let mut sandwich = MonitorCheck::new("delta0_sandwich");
    let mut lipschitz = MonitorCheck::new("lipschitz");
    let mut modinq4 = MonitorCheck::new("modinq4");
    let mut gap = MonitorCheck::new("irreducible_gap");
    let blocks = recurrent_blocks(spec);

    for (k, r) in trace.records.iter().enumerate() {
        let n = r.n;
        for (id, l) in &r.lengths {
            if id.as_str().starts_with('~') || !l.w.is_finite() || l.w < LN_2_OVER_PI {
                continue;
            }
            let g = collar_log_gap(l.length_upper);
            collar.record(n, g < PI.ln(), || format!("{id}: |log m - w| = {g}"));
            if l.length_upper < p.delta0 {
                if let Some(q) = r.lengths_q.get(id) {
                    let ok = q.length_upper / E < l.length_upper && l.length_upper <= q.length_upper;
                    sandwich.record(n, ok, || format!("{id}: l_E = {}, l_Q = {}", l.length_upper, q.length_upper));
                }
            }
        }
        if k > 0 {
            if let Some(dt) = r.dt_est {
                let prev = &trace.records[k - 1];
                for (id, l) in &r.lengths {
                    if let Some(q) = prev.lengths.get(id) {
                        let dw = (l.w - q.w).abs();
                        if dw.is_finite() {
                            lipschitz.record(n, dw <= 2.0 * dt + 1e-12, || format!("{id}: |dw| = {dw}, dT = {dt}"));
                        }
                    }
                }
            }
        }
        for curve in &spec.curves {
            let Some(w1) = r.lengths_q.get(&curve.id).map(|l| l.w) else { continue };
            let Ok(lifts) = spec.lifts(&curve.id) else { continue };
            for lift in lifts {
                if let Some(w2) = r.lengths_q.get(lift).map(|l| l.w) {
                    if w1.is_finite() && w2.is_finite() {
                        modinq4.record(n, w2 >= w1 - step, || format!("{} -> {lift}: {w1} vs {w2}", curve.id));
                    }
                }
            }
        }
        for block in &blocks {
            let ws: Vec<f64> = block.iter().filter_map(|id| r.lengths.get(id).map(|l| l.w)).collect();
            if ws.len() == block.len() && ws.iter().all(|w| w.is_finite()) {
                let spread = ws.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - ws.iter().cloned().fold(f64::INFINITY, f64::min);
                let bound = p.p.saturating_sub(3) as f64 * step;
                gap.record(n, spread <= bound, || format!("spread {spread} > {bound}"));
            }
        }
    }
    MonitorReport {
        checks: vec![collar, sandwich, lipschitz, modinq4, gap],
    }
}
