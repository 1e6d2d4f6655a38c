use std::collections::BTreeSet;

use grassmann_verify::checks::{registry, Origin};
use grassmann_verify::{
    emit_report, parse_report, run_suite, CheckResult, ConfigError, FileConfig, Format, Report,
    Suite, SuiteConfig,
};

fn cfg(suite: Suite, dims: &[usize], trials: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        suite,
        dims: dims.to_vec(),
        trials,
        seed,
        ..SuiteConfig::default()
    }
}

#[test]
fn equal_seeds_give_identical_bytes() {
    let c = cfg(Suite::Atlas, &[8], 50, 42);
    let a = emit_report(&Report::new(&c, run_suite(&c).unwrap()), Format::Json);
    let b = emit_report(&Report::new(&c, run_suite(&c).unwrap()), Format::Json);
    assert_eq!(a, b);
    let other = cfg(Suite::Atlas, &[8], 50, 43);
    let c2 = emit_report(
        &Report::new(&other, run_suite(&other).unwrap()),
        Format::Json,
    );
    assert_ne!(a, c2);
}

#[test]
fn all_checks_pass_on_small_dims() {
    let c = SuiteConfig {
        ladder: vec![16, 32, 64],
        ..cfg(Suite::All, &[2, 4, 8, 16], 20, 5)
    };
    let results = run_suite(&c).unwrap();
    assert_eq!(results.len(), registry().len());
    for r in &results {
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn forced_failure_stays_isolated() {
    let mut c = cfg(Suite::Atlas, &[4, 8], 20, 1);
    c.tolerances.insert("roundtrip_eps".into(), 1e-30);
    let results = run_suite(&c).unwrap();
    for r in &results {
        let expect_fail = r.name.starts_with("atlas.roundtrip");
        assert_eq!(r.pass, !expect_fail, "{r:?}");
    }
    // A check-name override beats the shared key.
    c.tolerances
        .insert("atlas.roundtrip_subspace".into(), 1e-10);
    let results = run_suite(&c).unwrap();
    let subspace = results
        .iter()
        .find(|r| r.name == "atlas.roundtrip_subspace")
        .unwrap();
    assert!(subspace.pass);
}

#[test]
fn suites_select_their_checks() {
    let c = cfg(Suite::Restricted, &[4], 2, 0);
    let names: Vec<String> = run_suite(&c).unwrap().into_iter().map(|r| r.name).collect();
    assert!(names.iter().all(|n| n.starts_with("restricted.")));
    let expect = registry()
        .iter()
        .filter(|s| s.group == Suite::Restricted)
        .count();
    assert_eq!(names.len(), expect);
}

#[test]
fn registry_covers_every_declared_invariant() {
    let declared: BTreeSet<&str> = [
        "opcore.projection_identities",
        "opcore.schatten_ideal",
        "opcore.schatten_unitary_invariance",
        "opcore.schatten_monotonicity",
        "atlas.roundtrip_coords",
        "atlas.roundtrip_subspace",
        "atlas.transition_consistency",
        "atlas.cocycle",
        "atlas.covering",
        "atlas.hilbert_specialization",
        "bundles.jacobian_fd",
        "bundles.jacobian_complex_step",
        "bundles.duality_invariance",
        "bundles.contravariant_functoriality",
        "bundles.tensor_square",
        "bundles.pairing_bilinearity",
        "restricted.virtual_dim_invariance",
        "restricted.polarization_unitary_invariance",
        "restricted.criteria_equivalence",
        "restricted.ladder_embedding",
    ]
    .into_iter()
    .collect();
    let specs = registry();
    let invariants: BTreeSet<&str> = specs
        .iter()
        .filter(|s| s.origin == Origin::Invariant)
        .map(|s| s.name)
        .collect();
    assert_eq!(invariants, declared);
    let all: BTreeSet<&str> = specs.iter().map(|s| s.name).collect();
    assert_eq!(all.len(), specs.len(), "check names must be unique");
}

#[test]
fn empty_report_is_just_checks() {
    let json = emit_report(&Report::from_checks(vec![]), Format::Json);
    assert_eq!(json.trim(), r#"{"checks":[]}"#);
    assert_eq!(emit_report(&Report::from_checks(vec![]), Format::Text), "");
}

fn sample() -> CheckResult {
    CheckResult {
        name: "atlas.cocycle".into(),
        trials: 100,
        max_abs_error: 1.0 / 3.0 * 1e-12,
        tolerance: 1e-9,
        pass: true,
        worst_seed: Some(u64::MAX),
    }
}

#[test]
fn one_passing_check_renders() {
    let report = Report::from_checks(vec![sample()]);
    let json = emit_report(&report, Format::Json);
    assert!(json.contains(r#""pass":true"#));
    let expect = format!(r#""max_abs_error":{:.16e}"#, sample().max_abs_error);
    assert!(json.contains(&expect), "{json}");
    assert!(
        json.contains(r#""tolerance":1.0000000000000001e-9"#),
        "{json}"
    );
    let text = emit_report(&report, Format::Text);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("PASS atlas.cocycle"));
}

#[test]
fn json_reparses_to_the_same_results() {
    let c = cfg(Suite::Bundles, &[4], 5, 9);
    let report = Report::new(&c, run_suite(&c).unwrap());
    let json = emit_report(&report, Format::Json);
    assert_eq!(parse_report(&json).unwrap(), report);
    let failed = Report::from_checks(vec![CheckResult {
        max_abs_error: f64::MAX,
        pass: false,
        worst_seed: None,
        ..sample()
    }]);
    assert_eq!(
        parse_report(&emit_report(&failed, Format::Json)).unwrap(),
        failed
    );
}

#[test]
fn json_keys_are_sorted() {
    let c = cfg(Suite::Atlas, &[4], 2, 0);
    let json = emit_report(&Report::new(&c, run_suite(&c).unwrap()), Format::Json);
    let top: Vec<usize> = ["\"checks\"", "\"dims\"", "\"seed\"", "\"suite\""]
        .iter()
        .map(|k| json.find(k).unwrap())
        .collect();
    assert!(top.windows(2).all(|w| w[0] < w[1]), "{json}");
}

#[test]
fn invalid_configs_are_rejected() {
    let base = SuiteConfig::default();
    assert_eq!(
        run_suite(&SuiteConfig {
            trials: 0,
            ..base.clone()
        }),
        Err(ConfigError::NoTrials)
    );
    assert_eq!(
        run_suite(&SuiteConfig {
            dims: vec![4, 1],
            ..base.clone()
        }),
        Err(ConfigError::DimTooSmall(1))
    );
    assert_eq!(
        run_suite(&SuiteConfig {
            dims: vec![],
            ..base.clone()
        }),
        Err(ConfigError::NoDims)
    );
    assert!(matches!(
        run_suite(&SuiteConfig {
            ladder: vec![32, 16],
            ..base.clone()
        }),
        Err(ConfigError::BadLadder(_))
    ));
    let mut unknown = base.clone();
    unknown.tolerances.insert("nonsense".into(), 1.0);
    assert_eq!(
        run_suite(&unknown),
        Err(ConfigError::UnknownTolerance("nonsense".into()))
    );
    let mut negative = base.clone();
    negative.tolerances.insert("cocycle_eps".into(), -1.0);
    assert!(matches!(
        run_suite(&negative),
        Err(ConfigError::BadTolerance { .. })
    ));
    assert_eq!(
        "everything".parse::<Suite>(),
        Err(ConfigError::UnknownSuite("everything".into()))
    );
    assert!(SuiteConfig::parse_override("cocycle_eps").is_err());
    assert_eq!(
        SuiteConfig::parse_override("cocycle_eps=1e-3").unwrap(),
        ("cocycle_eps".into(), 1e-3)
    );
}

#[test]
fn config_file_fills_fields() {
    let file = FileConfig::parse(
        r#"
suite = "bundles"
dims = [4, 8]
trials = 7
seed = 3
ladder = [8, 16]

[tol]
cocycle_eps = 1e-8
"#,
    )
    .unwrap();
    let mut c = SuiteConfig::default();
    file.apply(&mut c).unwrap();
    assert_eq!(c.suite, Suite::Bundles);
    assert_eq!(c.dims, vec![4, 8]);
    assert_eq!(c.trials, 7);
    assert_eq!(c.seed, 3);
    assert_eq!(c.ladder, vec![8, 16]);
    assert_eq!(c.tolerances["cocycle_eps"], 1e-8);
    assert!(FileConfig::parse("colour = 1").is_err());
}
