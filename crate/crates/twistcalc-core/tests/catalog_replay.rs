//! Full catalog replay: every family builds, every twist's reference rows
//! reproduce, and the only engine-vs-reference divergences are the two the
//! catalog deliberately records.

use twistcalc_core::quadrics::{self, ParamValues, SANCTIONED_DISCREPANCIES};
use twistcalc_core::report::CheckStatus;

#[test]
fn every_family_verifies_clean() {
    let cat = quadrics::builtin();
    let report = quadrics::verify_all(cat, &ParamValues::default()).expect("verification runs");
    let failures: Vec<_> = report.failures().collect();
    assert!(
        failures.is_empty(),
        "unexpected failures:\n{}",
        failures
            .iter()
            .map(|c| format!("  {}: {}\n    expected: {:?}\n    computed: {:?}", c.id, c.detail, c.expected, c.computed))
            .collect::<Vec<_>>()
            .join("\n")
    );
    assert!(
        report.is_clean(&SANCTIONED_DISCREPANCIES),
        "discrepancy set diverged: {:?}",
        report.discrepancy_ids()
    );
    // The replay is substantial: hundreds of reference rows.
    assert!(
        report.count(CheckStatus::Pass) > 300,
        "only {} passing checks",
        report.count(CheckStatus::Pass)
    );
}

#[test]
fn centrality_holds_on_every_twist() {
    let cat = quadrics::builtin();
    for fname in cat.family_names() {
        let family = cat
            .build_family(fname, &ParamValues::default())
            .expect("family builds");
        for tname in cat.twist_names(fname) {
            let bundle = cat.build_twist(&family, tname).expect("twist builds");
            let report = quadrics::centrality_report(&bundle).expect("centrality runs");
            let failures: Vec<_> = report.failures().collect();
            assert!(
                failures.is_empty(),
                "{}:{} centrality failures:\n{}",
                fname,
                tname,
                failures
                    .iter()
                    .map(|c| format!("  {}: {} {:?}", c.id, c.detail, c.computed))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
        }
    }
}

#[test]
fn broken_twist_control_detects_loss_of_centrality() {
    let report = quadrics::broken_centrality_control(quadrics::builtin()).expect("control runs");
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "control failures: {:?}", failures);
    assert!(report.count(CheckStatus::Pass) >= 2);
}

#[test]
fn quotient_slice_dimensions_certified_everywhere() {
    let cat = quadrics::builtin();
    for fname in cat.family_names() {
        let family = cat
            .build_family(fname, &ParamValues::default())
            .expect("family builds");
        for tname in cat.twist_names(fname) {
            let bundle = cat.build_twist(&family, tname).expect("twist builds");
            let report = quadrics::hilbert_report(&bundle, 4).expect("dimension counts run");
            let failures: Vec<_> = report.failures().collect();
            assert!(
                failures.is_empty(),
                "{}:{} dimension failures:\n{}",
                fname,
                tname,
                failures
                    .iter()
                    .map(|c| format!("  {}: {} {:?}", c.id, c.detail, c.computed))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
        }
    }
}

#[test]
fn reference_rows_hold_at_non_unit_parameters() {
    // The reference tables carry the square parameters symbolically, so any
    // identity that only held at a = b = 1 by coincidence breaks here.
    let cat = quadrics::builtin();
    let cases: [(&str, &[(&str, i64)]); 3] = [
        ("c", &[("a", 4)]),
        ("d", &[("a", 4)]),
        ("fgh", &[("a", 4), ("b", 9)]),
    ];
    for (fname, binds) in cases {
        let mut params = ParamValues::default();
        for (p, v) in binds {
            params.set(p, num_rational::BigRational::from_integer((*v).into()));
        }
        let report = quadrics::verify_family(cat, fname, &params).expect("family verifies");
        let failures: Vec<_> = report.failures().collect();
        assert!(
            failures.is_empty(),
            "{} at non-unit parameters:\n{}",
            fname,
            failures
                .iter()
                .map(|c| format!("  {}: {}", c.id, c.detail))
                .collect::<Vec<_>>()
                .join("\n")
        );
    }
}
