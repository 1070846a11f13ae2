//! The acceptance criteria as a runnable suite.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use clap::Parser;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thurston_core::covering::{canned, canned_examples, OBSTRUCTED};
use thurston_core::format::{parse_oracle, to_json_pretty};
use thurston_core::matrix::poly::{characteristic_polynomial, Poly};
use thurston_core::matrix::{
    build_transition_matrix, depth_decomposition, frobenius_normal_form, is_f_stable, is_irreducible,
    leading_eigenvector, smallest_halving_power, spectral_radius, TransitionMatrix, HALVING_CAP,
};
use thurston_core::teich::constants::{a_base, LN_2_OVER_PI};
use thurston_core::teich::inequalities::{collar_log_gap, collar_within_bounds, pr1_holds, tech2_holds, tech_holds};
use thurston_core::teich::{
    canonical_obstruction, gamma_j_extract, initialize_configuration, run_iteration, InitOptions, Placement,
    RunParams, Verdict, WSeries,
};
use thurston_core::{ratio, CurveId, ExactMatrix, Rational};

use crate::args::{ConstantArgs, SuiteArgs};
use crate::commands::{resolve_constants, run_quiet};
use crate::output::OutDir;
use crate::{CliError, Command, Result};

/// Synthetic oracle with one unbounded curve, shipped with the crate.
pub const GROWING_GAMMA1: &str = include_str!("../fixtures/growing_gamma1.jsonl");

/// Seeds of the spider convergence criterion.
pub const SPIDER_SEEDS: [u64; 3] = [1, 2, 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fault {
    /// The unit entry of the Levy transition matrix becomes 99/100.
    Levy099,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Context {
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub module: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub module: &'static str,
    check: fn(&Context) -> std::result::Result<String, String>,
}

impl Criterion {
    pub fn matches(&self, filter: &str) -> bool {
        let f = filter.to_ascii_lowercase();
        self.id.to_string() == f || self.name.contains(&f) || self.module.contains(&f)
    }

    pub fn run(&self, ctx: &Context) -> Outcome {
        let (passed, detail) = match (self.check)(ctx) {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Outcome {
            id: self.id,
            name: self.name,
            module: self.module,
            passed,
            detail,
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "swap-exact", module: "matrix", check: swap_exact },
        Criterion { id: 2, name: "frobenius-identity", module: "matrix", check: frobenius_identity },
        Criterion { id: 3, name: "decomposition", module: "matrix", check: decomposition },
        Criterion { id: 4, name: "halving-power", module: "matrix", check: halving_power },
        Criterion { id: 5, name: "inequalities", module: "teich", check: inequalities },
        Criterion { id: 6, name: "printed-constants", module: "teich", check: printed_constants },
        Criterion { id: 7, name: "spider-convergence", module: "teich", check: spider_convergence },
        Criterion { id: 8, name: "pipeline-identities", module: "teich", check: pipeline_identities },
        Criterion { id: 9, name: "cli-determinism", module: "cli", check: cli_determinism },
    ]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn swap_exact(_: &Context) -> std::result::Result<String, String> {
    let a = ExactMatrix::from_ratios(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]).map_err(|e| e.to_string())?;
    ensure(is_irreducible(&a).map_err(|e| e.to_string())?, || "not irreducible".into())?;
    let r = spectral_radius(&a).map_err(|e| e.to_string())?;
    ensure(r.exact == Some(Rational::one()), || format!("lambda = {:?}", r.exact))?;
    let v = leading_eigenvector(&a).map_err(|e| e.to_string())?;
    let one = vec![Rational::one(), Rational::one()];
    ensure(v.exact.as_ref() == Some(&one), || format!("eigenvector {:?}", v.exact))?;
    Ok("lambda = 1, v = (1, 1)".into())
}

/// Sturm chain of `p`, built once and reused for every bisection step.
fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(Poly::new(r.coeffs().iter().map(|c| -c).collect()));
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &Rational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Largest real root of the characteristic polynomial, by Sturm bisection on dyadic points.
pub fn sturm_spectral_radius(m: &ExactMatrix) -> f64 {
    let p = characteristic_polynomial(m);
    let chain = sturm_chain(&p);
    let mut hi = m.max_norm() + Rational::one();
    let at_hi = sign_changes(&chain, &hi);
    let mut lo = ratio(-1, 1 << 20);
    for _ in 0..60 {
        let mid = (&lo + &hi) / ratio(2, 1);
        if sign_changes(&chain, &mid) > at_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ((lo + hi) / ratio(2, 1)).to_f64().unwrap_or(f64::NAN)
}

pub fn random_half_integer_matrix(rng: &mut ChaCha8Rng) -> ExactMatrix {
    let n = rng.random_range(1..=8usize);
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|_| (0..n).map(|_| ratio(rng.random_range(0..=4), 2)).collect())
        .collect();
    ExactMatrix::from_rows(rows).expect("square")
}

fn frobenius_identity(_: &Context) -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0f64;
    for k in 0..200 {
        let m = random_half_integer_matrix(&mut rng);
        let f = frobenius_normal_form(&m).map_err(|e| e.to_string())?;
        let oracle = sturm_spectral_radius(&m);
        let err = (f.spectral_radius.value - oracle).abs();
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("matrix {k}: blocks give {}, oracle {oracle}", f.spectral_radius.value))?;
    }
    Ok(format!("200 matrices, max deviation {worst:.1e}"))
}

/// Levy transition matrix, perturbed when the fault is injected.
fn levy_matrix(ctx: &Context) -> std::result::Result<TransitionMatrix, String> {
    let spec = canned("levy_cycle").map_err(|e| e.to_string())?;
    let mut t = build_transition_matrix(&spec, &spec.universe()).map_err(|e| e.to_string())?;
    if ctx.fault == Some(Fault::Levy099) {
        let n = t.dim();
        if let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| t.entries.get(i, j).is_one()) {
            t.entries.set(i, j, ratio(99, 100));
        }
    }
    Ok(t)
}

fn decomposition(ctx: &Context) -> std::result::Result<String, String> {
    for name in OBSTRUCTED {
        let spec = canned(name).map_err(|e| e.to_string())?;
        let dec = depth_decomposition(&spec, &spec.universe()).map_err(|e| format!("{name}: {e}"))?;
        ensure(is_f_stable(&spec, &dec.gamma_0).map_err(|e| e.to_string())?, || format!("{name}: gamma_0 not f-stable"))?;
        ensure(dec.lambda.at_least_one(), || format!("{name}: lambda = {} < 1", dec.lambda.value))?;
        let same = match (&dec.lambda_0.exact, &dec.lambda.exact) {
            (Some(a), Some(b)) => a == b,
            _ => (dec.lambda_0.value - dec.lambda.value).abs() <= 1e-9,
        };
        ensure(same, || format!("{name}: lambda_0 = {} vs lambda = {}", dec.lambda_0.value, dec.lambda.value))?;
        if !dec.gamma_inf.is_empty() {
            ensure(!dec.lambda_inf.at_least_one(), || format!("{name}: lambda_inf = {}", dec.lambda_inf.value))?;
        }
    }
    let levy = levy_matrix(ctx)?;
    let r = spectral_radius(&levy.entries).map_err(|e| e.to_string())?;
    ensure(r.exact == Some(Rational::one()), || {
        format!("levy_cycle: lambda = {} is not exactly 1", r.exact.map_or(r.value.to_string(), |e| e.to_string()))
    })?;
    Ok(format!("{} obstructed specs, levy lambda = 1 exactly", OBSTRUCTED.len()))
}

fn halving_power(_: &Context) -> std::result::Result<String, String> {
    let half = ratio(1, 2);
    let mut blocks = 0;
    for spec in canned_examples() {
        let universe = spec.universe();
        if !is_f_stable(&spec, &universe).unwrap_or(false) {
            continue;
        }
        let dec = depth_decomposition(&spec, &universe).map_err(|e| format!("{}: {e}", spec.name))?;
        if dec.gamma_inf.is_empty() {
            continue;
        }
        let a = dec.a_inf().entries;
        let m = smallest_halving_power(&a, HALVING_CAP).map_err(|e| format!("{}: {e}", spec.name))?;
        let norm_at = |k: usize| a.pow(k as u32).max_norm();
        ensure(norm_at(m) < half, || format!("{}: norm of power {m} not below 1/2", spec.name))?;
        ensure(m == 1 || norm_at(m - 1) >= half, || format!("{}: power {} already below 1/2", spec.name, m - 1))?;
        blocks += 1;
    }
    ensure(blocks > 0, || "no canned spec has an infinite-depth part".into())?;
    Ok(format!("{blocks} infinite-depth blocks, minimal powers confirmed"))
}

fn inequalities(_: &Context) -> std::result::Result<String, String> {
    const N: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = [0usize; 4];
    for _ in 0..N {
        let t = 10f64.powf(rng.random_range(0.0..6.0));
        bad[0] += !tech_holds(t) as usize;

        let (a, b) = (rng.random_range(1e-6..20.0), rng.random_range(1e-6..20.0));
        let beta = 10f64.powf(rng.random_range(-3.0..1.0));
        bad[1] += !tech2_holds(a, b, beta) as usize;

        let len = rng.random_range(2..40usize);
        let s = rng.random_range(0.0..1.0);
        let mut acc = 0.0;
        let seq: Vec<f64> = (0..len)
            .map(|_| {
                acc += rng.random_range(0.0..1.0);
                acc + rng.random_range(-s..=s)
            })
            .collect();
        let r = rng.random_range(1e-3..1.0);
        let noisy: Vec<f64> = seq.iter().map(|x| x + rng.random_range(-r..r) * 0.999).collect();
        bad[2] += !pr1_holds(&seq, &noisy, -2.0 * s, r) as usize;

        let l = 10f64.powf(rng.random_range(-6.0..(PI / 2.0).log10()));
        bad[3] += !(collar_within_bounds(l) && collar_log_gap(l) < PI.ln()) as usize;
    }
    ensure(bad.iter().all(|&b| b == 0), || {
        format!("violations tech {}, tech2 {}, pr1 {}, collar {}", bad[0], bad[1], bad[2], bad[3])
    })?;
    Ok(format!("4 x {N} samples, no violations"))
}

fn printed_constants(_: &Context) -> std::result::Result<String, String> {
    let printed = -0.451_582_705;
    ensure((LN_2_OVER_PI - printed).abs() < 5e-10, || format!("log(2/pi) = {LN_2_OVER_PI}"))?;
    ensure((LN_2_OVER_PI - (2f64.ln() - PI.ln())).abs() < 1e-15, || "log(2/pi) constant drifted".into())?;
    let independent = -(2.0 * (1.0 + 2f64.sqrt()).ln()).ln();
    let a = a_base();
    ensure((a - independent).abs() < 1e-5, || format!("A = {a}, independent {independent}"))?;
    Ok(format!("log(2/pi) = {LN_2_OVER_PI:.9}, -log log(2*sqrt2+3) = {a:.7}"))
}

/// Root of `f⁴(0) = f²(0)` for `f = z² + c` near `start`, by Newton's method with the
/// superattracting roots `c = 0` (order 3) and `c = -1` (order 2) divided out.
pub fn misiurewicz_parameter(start: Complex64) -> Complex64 {
    let mut c = start;
    for _ in 0..100 {
        let (mut z, mut dz) = (Complex64::zero(), Complex64::zero());
        let mut orbit = [(Complex64::zero(), Complex64::zero()); 5];
        for slot in orbit.iter_mut().skip(1) {
            dz = 2.0 * z * dz + 1.0;
            z = z * z + c;
            *slot = (z, dz);
        }
        let g = orbit[4].0 - orbit[2].0;
        if g.norm() == 0.0 {
            break;
        }
        let dg = orbit[4].1 - orbit[2].1;
        let step = 1.0 / (dg / g - 3.0 / c - 2.0 / (c + 1.0));
        c -= step;
        if step.norm() < 1e-16 {
            break;
        }
    }
    c
}

fn spider_convergence(_: &Context) -> std::result::Result<String, String> {
    let spec = canned("misiurewicz_i").map_err(|e| e.to_string())?;
    let oracle = misiurewicz_parameter(Complex64::new(0.1, 1.1));
    let params = RunParams::default();
    let mut worst = 0f64;
    for seed in SPIDER_SEEDS {
        let x0 = initialize_configuration(&spec, &Placement::Seed(seed), &InitOptions::default())
            .map_err(|e| e.to_string())?;
        let trace = run_iteration(&spec, &x0, &params).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(trace.verdict == Verdict::Converging, || format!("seed {seed}: verdict {:?}", trace.verdict))?;
        let tail = &trace.records[trace.records.len() - params.window..];
        ensure(tail.iter().all(|r| r.step_disp < 1e-10), || format!("seed {seed}: trailing displacement too large"))?;
        let c = trace.parameter().ok_or("no parameter recorded")?;
        let err = (c - oracle).norm();
        worst = worst.max(err);
        ensure(err < 1e-8, || format!("seed {seed}: parameter {c}, oracle {oracle}"))?;
        let stars: Vec<f64> = trace.records[trace.records.len() - 50..]
            .iter()
            .map(|r| r.bg_stats.as_ref().map_or(f64::NAN, |s| s.b_star))
            .collect();
        let (lo, hi) = stars.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        ensure(lo > 0.0 && (hi - lo) < 0.1 * hi, || format!("seed {seed}: b_star in [{lo}, {hi}]"))?;
    }
    Ok(format!("3 seeds converge, parameter error {worst:.1e}"))
}

fn pipeline_identities(_: &Context) -> std::result::Result<String, String> {
    let file = parse_oracle(GROWING_GAMMA1).map_err(|e| e.to_string())?;
    let spec = canned(file.spec.as_deref().unwrap_or("levy_cycle")).map_err(|e| e.to_string())?;
    let flags = ConstantArgs {
        trend_window: 5,
        ..ConstantArgs::default()
    };
    let resolved = resolve_constants(&spec, &flags, &file.overrides, None).map_err(|e| e.to_string())?;
    let series: Vec<WSeries> = file
        .series
        .iter()
        .map(|o| WSeries {
            label: o.label.clone(),
            records: o.records.clone(),
        })
        .collect();
    ensure(series.len() >= 3, || format!("fixture has {} traces", series.len()))?;
    let report = canonical_obstruction(&series, &resolved.constants, &spec, &resolved.extract).map_err(|e| e.to_string())?;
    let expected = vec![CurveId::from("gamma1")];
    ensure(report.gamma_c == expected, || format!("gamma_c = {:?}", report.gamma_c))?;
    ensure(report.independent_of_start, || "gamma_c depends on the trace".into())?;
    ensure(report.lambda_exact.as_deref() == Some("1"), || format!("lambda = {:?}", report.lambda_exact))?;
    for t in &report.traces {
        let mut inter: Option<BTreeSet<CurveId>> = None;
        for g in &t.gamma_j {
            let s: BTreeSet<CurveId> = g.gamma.iter().cloned().collect();
            inter = Some(match inter {
                None => s,
                Some(i) => i.intersection(&s).cloned().collect(),
            });
        }
        let gamma_u: BTreeSet<CurveId> = t.gamma_u.iter().cloned().collect();
        ensure(inter.as_ref() == Some(&gamma_u), || format!("{}: gamma_u is not the intersection", t.label))?;
        let (j, n) = t.j_n_c.ok_or_else(|| format!("{}: no (J_c, n_c)", t.label))?;
        let snap = &series.iter().find(|s| s.label == t.label).unwrap().records[n];
        let extracted = gamma_j_extract(snap, resolved.constants.a, j);
        let dec = depth_decomposition(&spec, &thurston_core::covering::pullback_closure(&spec, &extracted).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let finite: BTreeSet<CurveId> = extracted.iter().filter(|c| dec.gamma_0.contains(c)).cloned().collect();
        ensure(finite == gamma_u, || format!("{}: gamma at (J_c, n_c) is {finite:?}", t.label))?;
        ensure(t.gamma_c_is_gamma_u, || format!("{}: gamma_c differs from gamma_u", t.label))?;
    }
    Ok(format!("gamma_c = {{gamma1}} on {} traces, lambda = 1", series.len()))
}

fn cli_determinism(_: &Context) -> std::result::Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut traces = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let argv = ["thurston", "run", "--spec", "misiurewicz_i", "--iters", "100", "--seed", "7", "--out"];
        let cli = crate::Cli::try_parse_from(argv.iter().copied().chain([out.to_str().ok_or("path")?]))
            .map_err(|e| e.to_string())?;
        let Command::Run(args) = cli.command else { unreachable!() };
        run_quiet(&args).map_err(|e| e.to_string())?;
        traces.push(std::fs::read(out.join("trace.jsonl")).map_err(|e| e.to_string())?);
    }
    ensure(!traces[0].is_empty() && traces[0] == traces[1], || "traces differ between identical runs".into())?;
    Ok(format!("two seed-7 runs, {} identical trace bytes", traces[0].len()))
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub fault: Option<Fault>,
    pub filter: Option<String>,
    pub outcomes: Vec<Outcome>,
}

/// Runs the selected criteria concurrently; outcomes come back in criterion order.
pub fn run_suite(filter: Option<&str>, ctx: &Context) -> Vec<Outcome> {
    let selected: Vec<Criterion> = criteria()
        .into_iter()
        .filter(|c| filter.map_or(true, |f| c.matches(f)))
        .collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|c| s.spawn(move || c.run(ctx))).collect();
        handles
            .into_iter()
            .zip(&selected)
            .map(|(h, c)| {
                h.join().unwrap_or_else(|_| Outcome {
                    id: c.id,
                    name: c.name,
                    module: c.module,
                    passed: false,
                    detail: "panicked".into(),
                })
            })
            .collect()
    })
}

pub fn format_outcome(o: &Outcome) -> String {
    format!(
        "criterion {} {:<20} [{:<6}] {}  {}",
        o.id,
        o.name,
        o.module,
        if o.passed { "PASS" } else { "FAIL" },
        o.detail
    )
}

pub fn cmd_suite(args: &SuiteArgs) -> Result<()> {
    let ctx = Context {
        fault: args.inject_fault.as_deref().map(|_| Fault::Levy099),
    };
    let outcomes = run_suite(args.filter.as_deref(), &ctx);
    if outcomes.is_empty() {
        return Err(CliError::Validation(format!("filter {:?} selects no criteria", args.filter)));
    }
    for o in &outcomes {
        println!("{}", format_outcome(o));
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("{} {}", o.id, o.name))
        .collect();
    println!("{}/{} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if let Some(dir) = &args.out {
        let report = SuiteReport {
            fault: ctx.fault,
            filter: args.filter.clone(),
            outcomes,
        };
        OutDir::create(dir)?.write("suite.json", &to_json_pretty(&report))?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Acceptance(failed))
    }
}
