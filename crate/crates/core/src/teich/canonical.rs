//! Extraction of the canonical obstruction from `w`-traces.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::constants::PaperConstants;
use super::gamma::gamma_j_extract;
use super::iteration::IterationTrace;
use crate::covering::{pullback_closure, CoveringSpec, CurveId};
use crate::error::EngineError;
use crate::format::extended_f64;
use crate::matrix::{depth_decomposition, is_f_stable, obstruction_verdict, Depth, ObstructionVerdict};

pub const CONCLUSION_RATIONAL: &str = "CLH-equivalent to rational (model-level)";
pub const CONCLUSION_OBSTRUCTION: &str = "Thurston obstruction";

/// `w`-values of the universe curves along one orbit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WSeries {
    pub label: String,
    pub records: Vec<BTreeMap<CurveId, f64>>,
}

impl WSeries {
    pub fn from_trace(label: impl Into<String>, trace: &IterationTrace) -> Self {
        Self {
            label: label.into(),
            records: trace.records.iter().map(|r| r.w_snapshot()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractOptions {
    /// Ascending, each at least the constants' `j_min`.
    pub j_grid: Vec<f64>,
    /// Defaults to `E(J_max) + 10`.
    pub w_max_threshold: Option<f64>,
    /// Trailing window in which an unbounded curve must be nondecreasing.
    pub window: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            j_grid: vec![2.0, 4.0, 6.0, 8.0],
            w_max_threshold: None,
            window: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaAtJ {
    pub j: f64,
    /// `Γ_J`, the union over the orbit.
    pub gamma: Vec<CurveId>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceExtraction {
    pub label: String,
    pub gamma_j: Vec<GammaAtJ>,
    pub gamma_u: Vec<CurveId>,
    pub gamma_c: Vec<CurveId>,
    /// First grid value with `Γ_J = Γ_u`.
    pub j_c: Option<f64>,
    /// First `(J, n)` with `Γ_{J, x_n, 0} = Γ_u`.
    pub j_n_c: Option<(f64, usize)>,
    /// `Γ_c = Γ_u`.
    pub gamma_c_is_gamma_u: bool,
    /// Curves with `w ≥ E(J)` that landed outside the finite-depth part, as `(J, n, curve)`.
    pub lbcurve_conflicts: Vec<(f64, usize, CurveId)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub conclusion: String,
    pub gamma_c: Vec<CurveId>,
    pub lambda: Option<f64>,
    pub lambda_exact: Option<String>,
    pub eigenvector: Option<Vec<f64>>,
    pub depths: Vec<(CurveId, Depth)>,
    pub verdict: Option<ObstructionVerdict>,
    pub traces: Vec<TraceExtraction>,
    /// All traces produced the same `Γ_c`.
    pub independent_of_start: bool,
    /// Every trace found `J_c` and `(J_c, n_c)` and had `Γ_c = Γ_u`.
    pub identities_hold: bool,
    #[serde(serialize_with = "extended_f64")]
    pub w_max_threshold: f64,
    pub options: ExtractOptions,
    pub constants: PaperConstants,
}

fn in_universe_order(spec: &CoveringSpec, set: &BTreeSet<CurveId>) -> Vec<CurveId> {
    spec.universe().into_iter().filter(|id| set.contains(id)).collect()
}

/// Finite-depth part of `Γ_{J,x}` and the curves violating the `E(J)` screening.
fn finite_depth_part(
    spec: &CoveringSpec,
    extracted: &[CurveId],
    snapshot: &BTreeMap<CurveId, f64>,
    e_j: f64,
) -> Result<(BTreeSet<CurveId>, Vec<CurveId>), EngineError> {
    if extracted.is_empty() {
        return Ok((BTreeSet::new(), vec![]));
    }
    let base = if is_f_stable(spec, extracted)? {
        extracted.to_vec()
    } else {
        pullback_closure(spec, extracted)?
    };
    let dec = depth_decomposition(spec, &base)?;
    let finite: BTreeSet<CurveId> = dec.gamma_0.iter().filter(|id| extracted.contains(id)).cloned().collect();
    let conflicts = extracted
        .iter()
        .filter(|id| snapshot[*id] >= e_j && !finite.contains(*id))
        .cloned()
        .collect();
    Ok((finite, conflicts))
}

fn extract_one(
    spec: &CoveringSpec,
    series: &WSeries,
    constants: &PaperConstants,
    opts: &ExtractOptions,
    w_max: f64,
) -> Result<TraceExtraction, EngineError> {
    let mut per_j: Vec<(f64, Vec<BTreeSet<CurveId>>)> = Vec::new();
    let mut conflicts = Vec::new();
    for &j in &opts.j_grid {
        let e_j = constants.e_at(j);
        let mut parts = Vec::with_capacity(series.records.len());
        for (n, snap) in series.records.iter().enumerate() {
            let snap: BTreeMap<CurveId, f64> =
                snap.iter().filter(|(id, _)| spec.curve(id).is_some()).map(|(k, v)| (k.clone(), *v)).collect();
            let extracted = in_universe_order(spec, &gamma_j_extract(&snap, constants.a, j).into_iter().collect());
            let (finite, bad) = finite_depth_part(spec, &extracted, &snap, e_j)?;
            conflicts.extend(bad.into_iter().map(|c| (j, n, c)));
            parts.push(finite);
        }
        per_j.push((j, parts));
    }
    let gamma_js: Vec<(f64, BTreeSet<CurveId>)> = per_j
        .iter()
        .map(|(j, parts)| (*j, parts.iter().flatten().cloned().collect()))
        .collect();
    let gamma_u: BTreeSet<CurveId> = gamma_js
        .iter()
        .map(|(_, g)| g.clone())
        .reduce(|a, b| a.intersection(&b).cloned().collect())
        .unwrap_or_default();
    let j_c = gamma_js.iter().find(|(_, g)| *g == gamma_u).map(|(j, _)| *j);
    let j_n_c = per_j.iter().find_map(|(j, parts)| parts.iter().position(|p| *p == gamma_u).map(|n| (*j, n)));

    let mut gamma_c = BTreeSet::new();
    for id in spec.universe() {
        let w: Option<Vec<f64>> = series.records.iter().map(|r| r.get(&id).copied()).collect();
        let Some(w) = w else { continue };
        if w.len() < opts.window {
            continue;
        }
        let tail = &w[w.len() - opts.window..];
        if tail[tail.len() - 1] > w_max && tail.windows(2).all(|p| p[1] >= p[0]) {
            gamma_c.insert(id);
        }
    }
    Ok(TraceExtraction {
        label: series.label.clone(),
        gamma_j: gamma_js
            .iter()
            .map(|(j, g)| GammaAtJ {
                j: *j,
                gamma: in_universe_order(spec, g),
            })
            .collect(),
        gamma_c_is_gamma_u: gamma_c == gamma_u,
        gamma_u: in_universe_order(spec, &gamma_u),
        gamma_c: in_universe_order(spec, &gamma_c),
        j_c,
        j_n_c,
        lbcurve_conflicts: conflicts,
    })
}

pub fn check_grid(opts: &ExtractOptions, constants: &PaperConstants) -> Result<(), EngineError> {
    if opts.j_grid.is_empty() {
        return Err(EngineError::Config("J grid is empty".into()));
    }
    if opts.j_grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(EngineError::Config("J grid must be strictly ascending".into()));
    }
    if opts.j_grid[0] < constants.j_min {
        return Err(EngineError::Config(format!(
            "J = {} is below the admissible minimum {}",
            opts.j_grid[0], constants.j_min
        )));
    }
    if opts.window == 0 {
        return Err(EngineError::Config("window must be at least 1".into()));
    }
    Ok(())
}

/// Runs the extraction on every series and checks the results against each other.
pub fn canonical_obstruction(
    series: &[WSeries],
    constants: &PaperConstants,
    spec: &CoveringSpec,
    opts: &ExtractOptions,
) -> Result<ObstructionReport, EngineError> {
    if series.is_empty() {
        return Err(EngineError::Argument("no traces supplied".into()));
    }
    check_grid(opts, constants)?;
    let j_max = *opts.j_grid.last().expect("grid is non-empty");
    let w_max = opts.w_max_threshold.unwrap_or_else(|| constants.e_at(j_max) + 10.0);
    let traces = series
        .iter()
        .map(|s| extract_one(spec, s, constants, opts, w_max))
        .collect::<Result<Vec<_>, _>>()?;
    let gamma_c = traces[0].gamma_c.clone();
    let independent = traces.iter().all(|t| t.gamma_c == gamma_c);
    let identities_hold = traces
        .iter()
        .all(|t| t.j_c.is_some() && t.j_n_c.is_some() && t.gamma_c_is_gamma_u);

    let (conclusion, verdict) = if gamma_c.is_empty() {
        (CONCLUSION_RATIONAL, None)
    } else {
        let v = obstruction_verdict(spec, &gamma_c)?;
        if !v.is_obstruction {
            return Err(EngineError::Inconsistent {
                curves: gamma_c,
                lambda: v.lambda.value,
            });
        }
        (CONCLUSION_OBSTRUCTION, Some(v))
    };
    let depths = verdict
        .as_ref()
        .and_then(|v| v.decomposition.as_ref())
        .map(|d| d.depths.clone())
        .unwrap_or_default();
    Ok(ObstructionReport {
        conclusion: conclusion.into(),
        lambda: verdict.as_ref().map(|v| v.lambda.value),
        lambda_exact: verdict
            .as_ref()
            .and_then(|v| v.lambda.exact.as_ref())
            .map(crate::scalar::format_rational),
        eigenvector: verdict
            .as_ref()
            .and_then(|v| v.perron.as_ref())
            .map(|p| p.eigenvector.values.clone()),
        depths,
        gamma_c,
        verdict,
        traces,
        independent_of_start: independent,
        identities_hold,
        w_max_threshold: w_max,
        options: opts.clone(),
        constants: constants.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::canned;
    use crate::teich::constants::{compute_constants, ConstantParams};

    fn levy_series(label: &str, shift: f64) -> WSeries {
        WSeries {
            label: label.into(),
            records: (0..200)
                .map(|n| {
                    let n = n as f64;
                    [
                        ("gamma1".into(), n / 10.0 + shift),
                        ("gamma2".into(), 0.5 + 0.4 * (n / 7.0 + shift).sin()),
                    ]
                    .into()
                })
                .collect(),
        }
    }

    fn setup() -> (CoveringSpec, PaperConstants, ExtractOptions) {
        let spec = canned("levy_cycle").unwrap();
        let c = compute_constants(&ConstantParams::from_spec(&spec, 2.0).unwrap()).unwrap();
        let opts = ExtractOptions {
            w_max_threshold: Some(15.0),
            ..ExtractOptions::default()
        };
        (spec, c, opts)
    }

    #[test]
    fn growing_curve_is_the_obstruction() {
        let (spec, c, opts) = setup();
        let series = [levy_series("a", 0.0), levy_series("b", 0.3), levy_series("c", -0.2)];
        let r = canonical_obstruction(&series, &c, &spec, &opts).unwrap();
        assert_eq!(r.gamma_c, vec![CurveId::from("gamma1")]);
        assert!(r.independent_of_start && r.identities_hold);
        assert_eq!(r.lambda_exact.as_deref(), Some("1"));
        assert_eq!(r.conclusion, CONCLUSION_OBSTRUCTION);
    }

    #[test]
    fn bounded_series_is_rational() {
        let (spec, c, opts) = setup();
        let flat = WSeries {
            label: "flat".into(),
            records: (0..50).map(|_| [("gamma1".into(), 1.0), ("gamma2".into(), 0.0)].into()).collect(),
        };
        let r = canonical_obstruction(&[flat], &c, &spec, &opts).unwrap();
        assert!(r.gamma_c.is_empty());
        assert_eq!(r.conclusion, CONCLUSION_RATIONAL);
    }

    #[test]
    fn grid_below_threshold_is_rejected() {
        let (spec, c, mut opts) = setup();
        opts.j_grid = vec![0.5, 4.0];
        assert!(matches!(
            canonical_obstruction(&[levy_series("a", 0.0)], &c, &spec, &opts),
            Err(EngineError::Config(_))
        ));
    }

    #[test]
    fn unbounded_non_obstruction_is_inconsistent() {
        let spec = canned("swap").unwrap();
        let c = compute_constants(&ConstantParams::from_spec(&spec, 2.0).unwrap()).unwrap();
        let opts = ExtractOptions {
            j_grid: vec![4.0, 6.0, 8.0],
            w_max_threshold: Some(15.0),
            ..ExtractOptions::default()
        };
        let s = WSeries {
            label: "s".into(),
            records: (0..200)
                .map(|n| [("gamma1".into(), n as f64 / 10.0), ("gamma2".into(), n as f64 / 10.0)].into())
                .collect(),
        };
        assert!(matches!(
            canonical_obstruction(&[s], &c, &spec, &opts),
            Err(EngineError::Inconsistent { .. })
        ));
    }
}
