//! Replay of the geometry verification suites: the round cylinder must come
//! out entirely classical, the hyperboloid tables must verify exactly with
//! the expected set of printed-variant notes, and the degenerate cases must
//! be refused with the right errors.

use twistcalc_core::error::CoreError;
use twistcalc_core::geometry::{cylinder_report, geometry_report, hyperboloid_report};
use twistcalc_core::quadrics::{builtin, ParamValues, TwistBundle};
use twistcalc_core::report::{CheckStatus, Report};
use twistcalc_core::scalar::Rational;

fn bundle(family: &str, twist: &str, params: &[(&str, i64, i64)]) -> TwistBundle {
    let catalog = builtin();
    let mut pv = ParamValues::default();
    for (name, num, den) in params {
        pv.set(name, Rational::new((*num).into(), (*den).into()));
    }
    let fam = catalog.build_family(family, &pv).expect("family builds");
    catalog.build_twist(&fam, twist).expect("twist builds")
}

fn assert_clean_with_infos(report: &Report, expected_infos: &[&str]) {
    let failures: Vec<_> = report.failures().collect();
    assert!(
        failures.is_empty(),
        "geometry failures: {:#?}",
        failures
    );
    assert_eq!(report.count(CheckStatus::Discrepancy), 0);
    let infos: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| matches!(c.status, CheckStatus::Info))
        .map(|c| c.id.as_str())
        .collect();
    assert_eq!(infos, expected_infos, "info rows changed");
}

#[test]
fn cylinder_suite_is_classical_and_clean() {
    let b = bundle("c", "abelian", &[]);
    let report = geometry_report(&b, None).expect("cylinder suite runs");
    assert_clean_with_infos(&report, &["c:abelian:geometry/shape-printed-variant-sign"]);
    assert!(report.count(CheckStatus::Pass) >= 18);
}

#[test]
fn cylinder_runs_at_a_different_radius() {
    let b = bundle("c", "abelian", &[]);
    let c = Rational::new(2.into(), 1.into());
    let report = cylinder_report(&b, Some(&c)).expect("radius-2 cylinder runs");
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "failures at R = 2: {:#?}", failures);
}

#[test]
fn cylinder_requires_round_cross_section() {
    let b = bundle("c", "abelian", &[("a", 4, 1)]);
    let err = geometry_report(&b, None).unwrap_err();
    assert!(matches!(err, CoreError::ParamConstraint { .. }), "{err}");
}

#[test]
fn hyperboloid_suite_matches_all_tables() {
    let b = bundle("fgh", "jordanian", &[]);
    let report = geometry_report(&b, None).expect("hyperboloid suite runs");
    assert_clean_with_infos(
        &report,
        &[
            "fgh:jordanian:geometry/metric-printed-variant-hh",
            "fgh:jordanian:geometry/metric-printed-variant-eph",
            "fgh:jordanian:geometry/gstar-printed-variant-hh",
            "fgh:jordanian:geometry/gstar-printed-variant-hep",
            "fgh:jordanian:geometry/gstar-printed-variant-epep",
            "fgh:jordanian:geometry/gstar-printed-variant-eph",
            "fgh:jordanian:geometry/nabla-star-printed-variant-eep",
        ],
    );
    assert!(report.count(CheckStatus::Pass) >= 20);
}

#[test]
fn hyperboloid_runs_at_another_c() {
    let b = bundle("fgh", "jordanian", &[]);
    let c = Rational::new(3.into(), 2.into());
    let report = hyperboloid_report(&b, Some(&c)).expect("c = 3/2 hyperboloid runs");
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "failures at c = 3/2: {:#?}", failures);
}

#[test]
fn hyperboloid_requires_unit_parameters() {
    let b = bundle("fgh", "jordanian", &[("a", 4, 1), ("b", 9, 1)]);
    let err = geometry_report(&b, None).unwrap_err();
    assert!(matches!(err, CoreError::ParamConstraint { .. }), "{err}");
}

#[test]
fn apex_twist_is_refused() {
    let b = bundle("fgh", "dilation", &[]);
    let err = geometry_report(&b, None).unwrap_err();
    assert!(matches!(err, CoreError::ProjectionUndefined(_)), "{err}");
}

#[test]
fn families_without_a_suite_are_reported() {
    let b = bundle("a", "abelian", &[]);
    let err = geometry_report(&b, None).unwrap_err();
    assert!(matches!(err, CoreError::Unsupported(_)), "{err}");
}
