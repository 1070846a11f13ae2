use proptest::prelude::*;
use thurston_core::covering::{canned, canned_examples, validate_spec, CoveringSpec, OBSTRUCTED};
use thurston_core::matrix::{
    build_transition_matrix, depth_decomposition, entries_are_reciprocal_sums, frobenius_normal_form,
    obstruction_verdict, spectral_radius, universe_summary,
};
use thurston_core::{ratio, ExactMatrix, Float32Matrix, FloatMatrix, Rational};

fn half_integer(entries: &[u8], n: usize) -> ExactMatrix {
    let rows = (0..n).map(|i| (0..n).map(|j| ratio(entries[i * n + j] as i64, 2)).collect()).collect();
    ExactMatrix::from_rows(rows).unwrap()
}

#[test]
fn canned_specs_validate_and_round_trip() {
    for spec in canned_examples() {
        assert!(validate_spec(&spec).is_empty(), "{}", spec.name);
        assert_eq!(CoveringSpec::from_json(&spec.to_json()).unwrap(), spec);
        let m = build_transition_matrix(&spec, &spec.universe()).unwrap();
        assert!(entries_are_reciprocal_sums(&m.entries, spec.degree), "{}", spec.name);
    }
}

#[test]
fn verdicts_of_canned_specs() {
    for name in OBSTRUCTED {
        let spec = canned(name).unwrap();
        assert!(obstruction_verdict(&spec, &spec.universe()).unwrap().is_obstruction, "{name}");
    }
    let swap = canned("swap").unwrap();
    let v = obstruction_verdict(&swap, &swap.universe()).unwrap();
    assert!(!v.is_obstruction);
    assert_eq!(v.lambda.exact, Some(ratio(1, 2)));
}

#[test]
fn levy_radius_is_one_and_beta_is_positive() {
    let spec = canned("levy_cycle").unwrap();
    let dec = depth_decomposition(&spec, &spec.universe()).unwrap();
    assert_eq!(dec.lambda.exact, Some(Rational::from_integer(1.into())));
    let s = universe_summary(&spec).unwrap();
    assert!(s.beta.value > 0.0 && s.beta.value <= 1.0);
}

#[test]
fn every_scalar_type_agrees_on_the_golden_matrix() {
    let exact = ExactMatrix::from_ratios(&[&[(1, 1), (1, 1)], &[(1, 1), (0, 1)]]).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let r = spectral_radius(&exact).unwrap();
    assert!(r.lower <= golden && golden <= r.upper);
    let f64m: FloatMatrix = exact.to_f64();
    assert!((spectral_radius(&f64m).unwrap().value - golden).abs() < 1e-10);
    let f32m: Float32Matrix = exact.map(|x| thurston_core::Scalar::to_f64(x) as f32);
    assert!((spectral_radius(&f32m).unwrap().value - golden).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn whole_radius_is_the_largest_block_radius(n in 1usize..7, entries in prop::collection::vec(0u8..=4, 49)) {
        let m = half_integer(&entries, n);
        let f = frobenius_normal_form(&m).unwrap();
        let blocks = f.blocks.iter().map(|b| b.spectral_radius.value).fold(0.0, f64::max);
        prop_assert!((f.spectral_radius.value - blocks).abs() < 1e-12);
        let float = spectral_radius(&m.to_f64()).unwrap();
        prop_assert!((float.value - f.spectral_radius.value).abs() < 1e-8);
    }

    #[test]
    fn permuting_the_basis_keeps_the_radius(n in 1usize..7, entries in prop::collection::vec(0u8..=4, 49), rot in 0usize..7) {
        let m = half_integer(&entries, n);
        let order: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let a = spectral_radius(&m).unwrap();
        let b = spectral_radius(&m.permuted(&order)).unwrap();
        prop_assert!((a.value - b.value).abs() < 1e-9);
        if let (Some(x), Some(y)) = (a.exact, b.exact) {
            prop_assert_eq!(x, y);
        }
    }
}
