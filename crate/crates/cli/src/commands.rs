//! `analyze`, `run` and `extract`.

use std::path::{Path, PathBuf};

use serde::Serialize;
use thurston_core::covering::{orbifold_characteristic, CurveId, Orbifold};
use thurston_core::format::{
    bg_series_csv, parse_oracle, parse_trace_jsonl, to_json_pretty, trace_to_jsonl, w_series_csv, OracleOverrides,
};
use thurston_core::matrix::frobenius::frobenius_normal_form_with;
use thurston_core::matrix::{
    obstruction_verdict, universe_summary, FrobeniusForm, ObstructionVerdict, SpectralOptions, UniverseSummary,
};
use thurston_core::scalar::format_rational;
use thurston_core::teich::{
    canonical_obstruction, compute_constants, inequality_monitors, initialize_configuration, run_iteration,
    ConstantParams, ExtractOptions, InitOptions, IterationTrace, MonitorReport, ObstructionReport, PaperConstants,
    Placement, RunParams, Verdict, WSeries,
};
use thurston_core::teich::iteration::run_oracle;
use thurston_core::{CoveringSpec, EngineError};

use crate::args::{AnalyzeArgs, ConstantArgs, ExtractArgs, RunArgs};
use crate::output::{numbered, OutDir};
use crate::{read_to_string, resolve_spec, CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeConfig {
    pub spec: String,
    pub spectral_tol: f64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub command: &'static str,
    pub config: AnalyzeConfig,
    pub spec: String,
    pub universe: Vec<CurveId>,
    pub lambda: f64,
    pub lambda_exact: Option<String>,
    pub obstruction: bool,
    pub verdict: ObstructionVerdict,
    pub frobenius: FrobeniusForm,
    pub universe_summary: UniverseSummary,
    pub orbifold: Option<Orbifold>,
}

pub fn analyze_report(args: &AnalyzeArgs) -> Result<AnalyzeReport> {
    if !(args.spectral_tol > 0.0) {
        return Err(CliError::Validation(format!("--spectral-tol must be positive, got {}", args.spectral_tol)));
    }
    let spec = resolve_spec(&args.spec)?;
    let universe = spec.universe();
    let verdict = obstruction_verdict(&spec, &universe)?;
    let opts = SpectralOptions {
        tol: args.spectral_tol,
        ..SpectralOptions::default()
    };
    let frobenius = match &verdict.decomposition {
        Some(d) => frobenius_normal_form_with(&d.matrix.entries, &opts)?,
        None => {
            let m = thurston_core::matrix::build_transition_matrix(&spec, &universe)?;
            frobenius_normal_form_with(&m.entries, &opts)?
        }
    };
    let orbifold = spec.portrait.as_ref().map(orbifold_characteristic).transpose()?;
    Ok(AnalyzeReport {
        command: "analyze",
        config: AnalyzeConfig {
            spec: args.spec.clone(),
            spectral_tol: args.spectral_tol,
            out: args.output.out.clone(),
        },
        spec: spec.name.clone(),
        lambda: verdict.lambda.value,
        lambda_exact: verdict.lambda.exact.as_ref().map(format_rational),
        obstruction: verdict.is_obstruction,
        universe,
        frobenius,
        universe_summary: universe_summary(&spec)?,
        orbifold,
        verdict,
    })
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let report = analyze_report(args)?;
    let out = OutDir::create(&args.output.out)?;
    let path = out.write("report.json", &to_json_pretty(&report))?;
    println!(
        "{}: lambda = {}, obstruction = {}",
        report.spec,
        report.lambda_exact.clone().unwrap_or_else(|| format!("{:.12}", report.lambda)),
        report.obstruction
    );
    println!("wrote {}", path.display());
    Ok(())
}

/// Constants and extraction settings after applying defaults and overrides.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConstants {
    pub constants: PaperConstants,
    pub extract: ExtractOptions,
    /// Where `D` came from: `"flag"`, `"oracle"`, `"trace"` or `"default"`.
    pub d_source: &'static str,
}

/// Flags take precedence over oracle-file overrides, which take precedence over defaults.
pub fn resolve_constants(
    spec: &CoveringSpec,
    flags: &ConstantArgs,
    file: &OracleOverrides,
    measured_d: Option<f64>,
) -> Result<ResolvedConstants> {
    let mut params = ConstantParams::from_spec(spec, 0.0)?;
    params.delta0 = flags.delta0.or(file.delta0).unwrap_or(params.delta0);
    params.eps0 = flags.eps0.or(file.eps0).unwrap_or(params.eps0);
    params.eta = flags.eta.unwrap_or(params.eta);
    let (d, d_source) = match (flags.d_est, file.d_est, measured_d) {
        (Some(d), _, _) => (d, "flag"),
        (None, Some(d), _) => (d, "oracle"),
        (None, None, Some(d)) => (d, "trace"),
        _ => (0.0, "default"),
    };
    params.d_est = d;
    if let Some(b) = flags.beta {
        params.beta = b;
    }
    if let Some(m) = flags.m {
        params.m = m;
    }
    if let Some(m) = flags.big_m {
        params.big_m = m;
    }
    if let Some(c) = flags.c_count {
        params.c_count = c;
    }
    if let Some(p) = flags.p_reading {
        params.p_reading = p;
    }
    let probe = compute_constants(&params)?;
    let grid = match flags.j_grid.clone().or_else(|| file.j_grid.clone()) {
        Some(g) => g,
        None => (0..5).map(|k| probe.j_min.ceil() + 2.0 * k as f64).collect(),
    };
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CliError::Validation(format!("J grid must be non-empty and ascending, got {grid:?}")));
    }
    params.j = grid[0];
    let constants = compute_constants(&params)?;
    Ok(ResolvedConstants {
        constants,
        extract: ExtractOptions {
            j_grid: grid,
            w_max_threshold: flags.w_max.or(file.w_max_threshold),
            window: flags.trend_window,
        },
        d_source,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub spec: String,
    pub spec_name: String,
    pub oracle: Option<PathBuf>,
    /// Records per trace; the oracle length in oracle mode.
    pub iterations: usize,
    pub seeds: Vec<u64>,
    pub run: RunParams,
    pub init: InitOptions,
    pub oracle_overrides: OracleOverrides,
    pub resolved: ResolvedConstants,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceSummary {
    pub label: String,
    pub file: String,
    pub source: String,
    pub records: usize,
    pub verdict: Verdict,
    pub flagged: Vec<CurveId>,
    pub terminated: Option<String>,
    pub parameter: Option<[f64; 2]>,
    pub monitors: MonitorReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub config: RunConfig,
    pub traces: Vec<TraceSummary>,
    pub obstruction: Option<ObstructionReport>,
    pub error: Option<String>,
}

fn run_params(args: &RunArgs) -> Result<RunParams> {
    if args.iters == 0 {
        return Err(CliError::Validation("--iters must be at least 1".into()));
    }
    let p = RunParams {
        iterations: args.iters,
        b: args.b,
        conv_tol: args.conv_tol,
        obs_tol: args.obs_tol,
        window: args.window,
    };
    p.check().map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(p)
}

struct Traces {
    spec: CoveringSpec,
    spec_arg: String,
    labelled: Vec<(String, IterationTrace)>,
    overrides: OracleOverrides,
}

fn oracle_traces(args: &RunArgs, path: &Path, params: &RunParams) -> Result<Traces> {
    let file = parse_oracle(&read_to_string(path)?)?;
    let spec_arg = match (&args.spec, &file.spec) {
        (Some(s), _) => s.clone(),
        (None, Some(s)) => s.clone(),
        (None, None) => {
            return Err(CliError::Validation(
                "run needs --spec or an oracle header naming the spec".into(),
            ))
        }
    };
    let spec = resolve_spec(&spec_arg)?;
    if let Some(named) = &file.spec {
        if *named != spec.name {
            return Err(CliError::Validation(format!(
                "oracle was written for spec {named}, not {}",
                spec.name
            )));
        }
    }
    let labelled = file
        .series
        .iter()
        .map(|o| Ok((o.label.clone(), run_oracle(&spec, o, params)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Traces {
        spec,
        spec_arg,
        labelled,
        overrides: file.overrides,
    })
}

fn spider_traces(args: &RunArgs, seeds: &[u64], params: &RunParams) -> Result<Traces> {
    let Some(spec_arg) = args.spec.clone() else {
        return Err(CliError::Validation("run needs --spec or --oracle".into()));
    };
    let spec = resolve_spec(&spec_arg)?;
    if spec.portrait.is_none() {
        return Err(CliError::Validation(format!(
            "spec {} has no critical portrait; numeric iteration is unavailable, pass --oracle",
            spec.name
        )));
    }
    let mut labelled = Vec::new();
    for &seed in seeds {
        let x0 = initialize_configuration(&spec, &Placement::Seed(seed), &InitOptions::default())?;
        let trace = run_iteration(&spec, &x0, params).map_err(|e| match e {
            EngineError::Config(m) => CliError::Validation(m),
            e => e.into(),
        })?;
        labelled.push((format!("seed{seed}"), trace));
    }
    Ok(Traces {
        spec,
        spec_arg,
        labelled,
        overrides: OracleOverrides::default(),
    })
}

/// Writes traces, CSV series and the report; errors after writing when a trace terminated early
/// or the extraction failed.
pub fn run_quiet(args: &RunArgs) -> Result<RunReport> {
    let params = run_params(args)?;
    let seeds = if args.seeds.is_empty() { vec![0] } else { args.seeds.clone() };
    let traces = match &args.oracle {
        Some(path) => oracle_traces(args, path, &params)?,
        None => spider_traces(args, &seeds, &params)?,
    };
    let spec = &traces.spec;
    let measured_d = traces.labelled[0].1.records.first().and_then(|r| r.dt_est);
    let resolved = resolve_constants(spec, &args.constants, &traces.overrides, measured_d)?;

    let out = OutDir::create(&args.output.out)?;
    let mut summaries = Vec::new();
    for (k, (label, trace)) in traces.labelled.iter().enumerate() {
        let file = numbered("trace", "jsonl", k, label);
        out.write(&file, &trace_to_jsonl(trace))?;
        out.write(&numbered("w_series", "csv", k, label), &w_series_csv(trace))?;
        out.write(&numbered("bg_series", "csv", k, label), &bg_series_csv(trace))?;
        summaries.push(TraceSummary {
            label: label.clone(),
            file,
            source: trace.source.clone(),
            records: trace.records.len(),
            verdict: trace.verdict,
            flagged: trace.flagged.clone(),
            terminated: trace.terminated.clone(),
            parameter: trace.records.last().and_then(|r| r.parameter),
            monitors: inequality_monitors(trace, &resolved.constants, spec),
        });
    }

    let series: Vec<WSeries> = traces
        .labelled
        .iter()
        .map(|(label, t)| WSeries::from_trace(label.clone(), t))
        .collect();
    let extraction = canonical_obstruction(&series, &resolved.constants, spec, &resolved.extract);
    let terminated = summaries.iter().find_map(|s| s.terminated.clone().map(|t| format!("{}: {t}", s.label)));
    let (obstruction, error) = match &extraction {
        Ok(r) => (Some(r.clone()), terminated.clone()),
        Err(e) => (None, Some(e.to_string())),
    };
    let report = RunReport {
        command: "run",
        config: RunConfig {
            spec: traces.spec_arg.clone(),
            spec_name: spec.name.clone(),
            oracle: args.oracle.clone(),
            iterations: traces.labelled.iter().map(|(_, t)| t.records.len()).max().unwrap_or(0),
            seeds: if args.oracle.is_some() { vec![] } else { seeds },
            run: params,
            init: InitOptions::default(),
            oracle_overrides: traces.overrides.clone(),
            resolved,
            out: args.output.out.clone(),
        },
        traces: summaries,
        obstruction,
        error,
    };
    out.write("report.json", &to_json_pretty(&report))?;
    if let Some(t) = terminated {
        return Err(EngineError::Degenerate(t).into());
    }
    extraction?;
    Ok(report)
}

pub fn run(args: &RunArgs) -> Result<()> {
    let report = run_quiet(args)?;
    for s in &report.traces {
        println!("{}: {} records, verdict {:?}", s.label, s.records, s.verdict);
    }
    if let Some(o) = &report.obstruction {
        println!("gamma_c = {:?}: {}", o.gamma_c.iter().map(CurveId::as_str).collect::<Vec<_>>(), o.conclusion);
    }
    println!("wrote {}", report.config.out.join("report.json").display());
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractConfig {
    pub spec: String,
    pub spec_name: String,
    pub traces: Vec<PathBuf>,
    pub resolved: ResolvedConstants,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractReport {
    pub command: &'static str,
    pub config: ExtractConfig,
    pub obstruction: ObstructionReport,
}

pub fn extract(args: &ExtractArgs) -> Result<()> {
    let spec = resolve_spec(&args.spec)?;
    let mut series = Vec::new();
    let mut measured_d = None;
    for (k, path) in args.traces.iter().enumerate() {
        let parsed = parse_trace_jsonl(&read_to_string(path)?)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        if k == 0 {
            measured_d = parsed.first_dt;
        }
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("trace{k}"));
        series.push(WSeries {
            label,
            records: parsed.w,
        });
    }
    let resolved = resolve_constants(&spec, &args.constants, &OracleOverrides::default(), measured_d)?;
    let obstruction = canonical_obstruction(&series, &resolved.constants, &spec, &resolved.extract)?;
    let report = ExtractReport {
        command: "extract",
        config: ExtractConfig {
            spec: args.spec.clone(),
            spec_name: spec.name.clone(),
            traces: args.traces.clone(),
            resolved,
            out: args.output.out.clone(),
        },
        obstruction,
    };
    let out = OutDir::create(&args.output.out)?;
    let path = out.write("report.json", &to_json_pretty(&report))?;
    println!(
        "gamma_c = {:?}: {}",
        report.obstruction.gamma_c.iter().map(CurveId::as_str).collect::<Vec<_>>(),
        report.obstruction.conclusion
    );
    println!("wrote {}", path.display());
    Ok(())
}
