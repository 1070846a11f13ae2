use std::collections::BTreeMap;

use num_complex::Complex64;
use thurston_core::covering::canned;
use thurston_core::format::{parse_trace_jsonl, to_json_line, trace_to_jsonl};
use thurston_core::teich::iteration::{run_oracle, WOracle};
use thurston_core::teich::{
    initialize_configuration, pullback_step, run_iteration, InitOptions, Placement, RunParams, Verdict,
};
use thurston_core::{CurveId, EngineError, MarkedId, Point};

#[test]
fn exact_orbit_of_z2_plus_i_is_fixed() {
    let spec = canned("misiurewicz_i").unwrap();
    let place: BTreeMap<MarkedId, Point> = [
        ("c0", Point::zero()),
        ("v1", Point::one()),
        ("v2", Point::new(1.0, 1.0)),
        ("v3", Point::new(-1.0, 0.0)),
        ("inf", Point::Infinity),
    ]
    .into_iter()
    .map(|(k, p)| (MarkedId::from(k), p))
    .collect();
    let x = initialize_configuration(&spec, &Placement::Explicit(place), &InitOptions::default()).unwrap();
    let (y, diag) = pullback_step(&x, &spec).unwrap();
    assert!(diag.displacement < 1e-12);
    for (id, p) in &x.positions {
        assert!(p.distance(&y.positions[id]) < 1e-12, "{id}");
    }
}

#[test]
fn spider_recovers_the_parameter() {
    let spec = canned("misiurewicz_i").unwrap();
    let x0 = initialize_configuration(&spec, &Placement::Seed(9), &InitOptions::default()).unwrap();
    let t = run_iteration(&spec, &x0, &RunParams::default()).unwrap();
    assert_eq!(t.verdict, Verdict::Converging);
    assert!((t.parameter().unwrap() - Complex64::i()).norm() < 1e-8);
}

#[test]
fn traces_round_trip_through_jsonl() {
    let spec = canned("misiurewicz_i").unwrap();
    let x0 = initialize_configuration(&spec, &Placement::Seed(3), &InitOptions::default()).unwrap();
    let params = RunParams {
        iterations: 12,
        ..RunParams::default()
    };
    let t = run_iteration(&spec, &x0, &params).unwrap();
    let text = trace_to_jsonl(&t);
    assert_eq!(text.lines().count(), 12);
    let parsed = parse_trace_jsonl(&text).unwrap();
    assert_eq!(parsed.w.len(), 12);
    assert_eq!(parsed.first_dt, t.records[0].dt_est);
    for (snap, r) in parsed.w.iter().zip(&t.records) {
        assert_eq!(*snap, r.w_snapshot());
    }
    assert_eq!(text, trace_to_jsonl(&run_iteration(&spec, &x0, &params).unwrap()));
}

#[test]
fn oracle_verdicts() {
    let spec = canned("levy_cycle").unwrap();
    let constant = WOracle {
        label: "flat".into(),
        records: (0..30).map(|_| [("gamma1".into(), 1.0), ("gamma2".into(), 1.0)].into()).collect(),
    };
    assert_eq!(run_oracle(&spec, &constant, &RunParams::default()).unwrap().verdict, Verdict::Converging);
    let shrinking = WOracle {
        label: "pinch".into(),
        records: (0..100).map(|n| [("gamma1".into(), n as f64 / 10.0), ("gamma2".into(), 0.5)].into()).collect(),
    };
    let t = run_oracle(&spec, &shrinking, &RunParams::default()).unwrap();
    assert_eq!(t.verdict, Verdict::Obstructed);
    assert_eq!(t.flagged, vec![CurveId::from("gamma1")]);
    let stray = WOracle {
        label: "stray".into(),
        records: vec![[("delta".into(), 0.0)].into()],
    };
    assert!(matches!(run_oracle(&spec, &stray, &RunParams::default()), Err(EngineError::Spec(_))));
}

#[test]
fn infinite_values_serialize_as_strings() {
    let s = to_json_line(&thurston_core::teich::iteration::LengthSummary::from_w(f64::INFINITY));
    assert!(s.contains("\"inf\""), "{s}");
}
