//! Reference values for the running example and the small counting pair.

use approx::assert_abs_diff_eq;
use gradual_impact::af::argset;
use gradual_impact::attribution::{shapley_all, ShapleyConfig};
use gradual_impact::fixtures;
use gradual_impact::impact::{imp_dv, imp_dv_original, imp_si, Measure, SeriesConfig};
use gradual_impact::semantics::{degrees, SemanticsKind, SemanticsSpec};
use gradual_impact::ArgumentationFramework;

const SUBJECTS: [&[&str]; 10] = [
    &["a1"],
    &["a1", "a2"],
    &["a9"],
    &["a8"],
    &["a10"],
    &["a8", "a10"],
    &["a8", "a9", "a10"],
    &["a5"],
    &["a6"],
    &["a5", "a6"],
];

/// Impacts on a4, one row per (measure, semantics), columns in `SUBJECTS` order.
const IMPACTS_ON_A4: [(Measure, SemanticsKind, [f64; 10]); 8] = [
    (Measure::Dv, SemanticsKind::Hbs, [0.015, 0.069, 0.069, -0.174, -0.026, -0.174, -0.124, -0.158, 0.064, -0.094]),
    (Measure::Dv, SemanticsKind::Car, [0.001, 0.012, 0.011, -0.082, -0.002, -0.082, -0.072, -0.079, 0.011, -0.068]),
    (Measure::Dv, SemanticsKind::Max, [0.0, 0.118, 0.118, -0.118, -0.018, -0.118, 0.0, -0.118, 0.118, 0.0]),
    (Measure::Dv, SemanticsKind::Cs, [0.072, 0.161, 0.107, -0.327, -0.034, -0.327, -0.246, -0.327, 0.107, -0.220]),
    (Measure::Si, SemanticsKind::Hbs, [0.036, 0.071, 0.105, -0.235, -0.041, -0.276, -0.17, -0.196, 0.098, -0.098]),
    (Measure::Si, SemanticsKind::Car, [0.056, 0.112, 0.236, -0.264, -0.138, -0.402, -0.167, -0.255, 0.17, -0.085]),
    (Measure::Si, SemanticsKind::Max, [0.019, 0.037, 0.061, -0.135, -0.024, -0.159, -0.098, -0.111, 0.056, -0.056]),
    (Measure::Si, SemanticsKind::Cs, [0.026, 0.051, 0.076, -0.291, -0.018, -0.309, -0.233, -0.212, 0.069, -0.143]),
];

fn impact(af: &ArgumentationFramework, m: Measure, kind: SemanticsKind, x: &[&str], y: &str) -> f64 {
    let spec = SemanticsSpec::new(kind);
    let x = argset(x.iter().copied());
    match m {
        Measure::Dv => imp_dv(af, &spec, &x, y),
        Measure::DvOriginal => imp_dv_original(af, &spec, &x, y),
        Measure::Si => imp_si(af, &spec, &x, y, &ShapleyConfig::default(), &SeriesConfig::default()),
    }
    .unwrap()
    .value
}

#[test]
fn impacts_on_a4_match_reference_values() {
    let af = fixtures::running_example();
    for (m, kind, row) in IMPACTS_ON_A4 {
        for (x, expected) in SUBJECTS.iter().zip(row) {
            let got = impact(&af, m, kind, x, "a4");
            assert!((got - expected).abs() <= 0.002, "{m} {kind} {x:?}: {got} vs {expected}");
        }
    }
}

#[test]
fn degree_difference_intermediates() {
    let af = fixtures::running_example();
    let hbs = SemanticsSpec::hbs();
    // (X, y, σ after removing external attacks, σ after deleting X, impact)
    let rows: [(&[&str], &str, f64, f64, f64); 5] = [
        (&["a1"], "a4", 0.397, 0.382, 0.015),
        (&["a5"], "a4", 0.326, 0.484, -0.158),
        (&["a8", "a10"], "a4", 0.339, 0.514, -0.175),
        (&["a9"], "a4", 0.409, 0.339, 0.07),
        (&["a4"], "a5", 0.5, 0.5, 0.0),
    ];
    for (x, y, strongest, deleted, imp) in rows {
        let x = argset(x.iter().copied());
        let s1 = af.delete_attacks(&af.external_attacks(&x).unwrap()).unwrap();
        let s2 = af.delete_arguments(&x, y).unwrap();
        let d1 = degrees(&s1, &hbs).unwrap().degree(y).unwrap();
        let d2 = degrees(&s2, &hbs).unwrap().degree(y).unwrap();
        assert!((d1 - strongest).abs() <= 0.002, "{x:?}: {d1}");
        assert!((d2 - deleted).abs() <= 0.002, "{x:?}: {d2}");
        let v = imp_dv(&af, &hbs, &x, y).unwrap().value;
        assert!((v - imp).abs() <= 0.002, "{x:?}: {v}");
    }
}

#[test]
fn running_example_degrees_and_intensities() {
    let af = fixtures::running_example();
    let spec = SemanticsSpec::hbs();
    let w = degrees(&af, &spec).unwrap();
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    for (a, d) in [
        ("a1", golden),
        ("a2", golden),
        ("a3", 0.447),
        ("a4", 0.390),
        ("a5", 0.5),
        ("a6", 1.0),
        ("a7", golden),
        ("a8", golden),
        ("a9", golden),
        ("a10", golden),
        ("a11", 1.0),
    ] {
        assert_abs_diff_eq!(w.degree(a).unwrap(), d, epsilon = 0.002);
    }
    let s = shapley_all(&af, &spec, &ShapleyConfig::default()).unwrap();
    for (src, dst, v) in [
        ("a1", "a2", 0.382),
        ("a2", "a1", 0.382),
        ("a1", "a3", 0.276),
        ("a2", "a3", 0.276),
        ("a3", "a4", 0.178),
        ("a5", "a4", 0.196),
        ("a8", "a4", 0.235),
        ("a6", "a5", 0.5),
        ("a9", "a8", 0.382),
        ("a9", "a10", 0.382),
        ("a10", "a9", 0.382),
        ("a8", "a7", 0.382),
    ] {
        assert_abs_diff_eq!(s.value(src, dst).unwrap(), v, epsilon = 0.002);
    }
    assert_eq!(s.len(), 12);
}

#[test]
fn counting_pair_degrees_and_intensities() {
    let (without, with) = fixtures::counting_pair();
    let cs = SemanticsSpec::cs();
    let w1 = degrees(&without, &cs).unwrap();
    let w2 = degrees(&with, &cs).unwrap();
    for (a, d1, d2) in [("a1", 1.0, 1.0), ("a2", 0.02, 0.51), ("a3", 0.02, 0.26)] {
        assert_abs_diff_eq!(w1.degree(a).unwrap(), d1, epsilon = 0.005);
        assert_abs_diff_eq!(w2.degree(a).unwrap(), d2, epsilon = 0.005);
    }
    let s = shapley_all(&with, &cs, &ShapleyConfig::default()).unwrap();
    assert_abs_diff_eq!(s.value("a1", "a2").unwrap(), 0.49, epsilon = 0.005);
    assert_abs_diff_eq!(s.value("a2", "a3").unwrap(), -0.11, epsilon = 0.005);
    assert_abs_diff_eq!(s.value("a1", "a3").unwrap(), 0.85, epsilon = 0.005);
}

#[test]
fn self_attack_values() {
    let af = fixtures::self_attack();
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let hbs = SemanticsSpec::hbs();
    assert_abs_diff_eq!(degrees(&af, &hbs).unwrap().degree("a").unwrap(), golden, epsilon = 1e-9);
    assert_abs_diff_eq!(impact(&af, Measure::Dv, SemanticsKind::Hbs, &["a"], "a"), -0.382, epsilon = 0.001);
    assert_eq!(impact(&af, Measure::DvOriginal, SemanticsKind::Hbs, &["a"], "a"), 0.0);
    assert_abs_diff_eq!(impact(&af, Measure::Si, SemanticsKind::Hbs, &["a"], "a"), -0.276, epsilon = 0.001);
    let running = fixtures::running_example();
    assert_abs_diff_eq!(
        impact(&running, Measure::Si, SemanticsKind::Hbs, &["a10"], "a4"),
        -0.0402,
        epsilon = 0.0005
    );
}

#[test]
fn walk_impact_is_additive_over_the_reference_sets() {
    let af = fixtures::running_example();
    for kind in SemanticsKind::ALL {
        let pair = impact(&af, Measure::Si, kind, &["a5", "a6"], "a4");
        let parts = impact(&af, Measure::Si, kind, &["a5"], "a4") + impact(&af, Measure::Si, kind, &["a6"], "a4");
        assert_abs_diff_eq!(pair, parts, epsilon = 1e-12);
    }
}
