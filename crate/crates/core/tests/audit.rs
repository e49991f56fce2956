use gradual_impact::impact::Measure;
use gradual_impact::principles::{
    audit, check_principle, crosscheck_implications, replay, violates, AuditConfig, CheckConfig, Corpus, CorpusConfig,
    PrincipleId, PrincipleVerdict, DEFAULT_TOLERANCE,
};
use gradual_impact::semantics::{SemanticsKind, SemanticsSpec};

fn small(count: usize) -> AuditConfig {
    AuditConfig {
        corpus: CorpusConfig {
            count,
            seed: 7,
            ..CorpusConfig::default()
        },
        ..AuditConfig::default()
    }
}

#[test]
fn audit_is_deterministic() {
    let cfg = small(25);
    let a = audit(&cfg).unwrap().to_json().to_string();
    let b = audit(&cfg).unwrap().to_json().to_string();
    assert_eq!(a, b);
}

#[test]
fn vacuous_audit_without_fixtures() {
    let cfg = AuditConfig {
        fixtures: false,
        ..small(0)
    };
    let report = audit(&cfg).unwrap();
    assert_eq!(report.matrix.len(), 9 * 8);
    for v in &report.matrix {
        assert!(v.holds());
        assert_eq!(v.outcome.trials(), 0);
    }
    assert!(!report.matches_reference());
}

#[test]
fn walk_impact_under_hbs_satisfies_everything() {
    let cfg = AuditConfig {
        measures: vec![Measure::Si],
        semantics: vec![SemanticsKind::Hbs],
        ..small(40)
    };
    let report = audit(&cfg).unwrap();
    assert_eq!(report.matrix.len(), 9);
    assert!(report.matrix.iter().all(PrincipleVerdict::holds));
    assert!(report.render_table().lines().count() >= 10);
}

#[test]
fn small_audit_matches_reference_pattern_and_witnesses_replay() {
    let cfg = small(60);
    let report = audit(&cfg).unwrap();
    assert!(report.matches_reference(), "{:?}", report.reference_mismatches());
    assert!(crosscheck_implications(&report.matrix).unwrap().is_empty());

    // Round trip through JSON, then replay every witness from the parsed form.
    let json = report.to_json();
    let parsed: Vec<PrincipleVerdict> = serde_json::from_value(json["matrix"].clone()).unwrap();
    assert_eq!(parsed, report.matrix);
    let mut replayed = 0;
    for v in &parsed {
        if let Some(w) = v.witness() {
            let spec = SemanticsSpec::new(v.semantics);
            let (l, r) = replay(v.principle, v.measure, &spec, w, &cfg.check).unwrap();
            assert!(violates(v.principle, l, r, DEFAULT_TOLERANCE), "{} {} {}", v.principle, v.measure, v.semantics);
            assert!((l - w.lhs).abs() < 1e-12 && (r - w.rhs).abs() < 1e-12);
            replayed += 1;
        }
    }
    assert_eq!(replayed, 8);
}

#[test]
fn original_degree_difference_can_be_audited() {
    let corpus = Corpus::generate(&CorpusConfig { count: 15, ..CorpusConfig::default() }, true).unwrap();
    let v = check_principle(
        PrincipleId::Void,
        Measure::DvOriginal,
        &SemanticsSpec::hbs(),
        &corpus,
        &CheckConfig::default(),
    );
    assert!(v.holds());
    assert!(v.outcome.trials() > 0);
}
