//! End-to-end tests of the `twistcalc` binary: output shapes, exit codes and
//! the documented error behavior, run against the real catalog.

use std::process::{Command, Output};

fn twistcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistcalc"))
        .args(args)
        .env_remove("TWISTCALC_SAFETY_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn star_renders_the_deformed_coordinate_product() {
    let out = twistcalc(&["star", "a", "x1", "x2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "x1*x2 - i*nu*b^2\n");
}

#[test]
fn star_honors_parameter_bindings() {
    let out = twistcalc(&["star", "a", "x1", "x2", "--param", "b=2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "x1*x2 - 4*i*nu\n");
}

#[test]
fn star_latex_is_paper_style() {
    let out = twistcalc(&["star", "a", "x1", "x2", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "x^{1} \\star x^{2} = x^{1} x^{2} - i \\nu b^{2}\n"
    );
}

#[test]
fn star_json_carries_schema_and_term_list() {
    let out = twistcalc(&["star", "a", "x1", "x2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema"], "twistcalc/1");
    assert_eq!(doc["command"], "star");
    assert_eq!(doc["family"], "a");
    assert_eq!(doc["twist"], "abelian");
    assert_eq!(doc["result"], "x1*x2 - i*nu*b^2");
    let terms = doc["terms"].as_array().expect("term list");
    assert_eq!(terms.len(), 2);
}

#[test]
fn comm_of_coordinates_vanishes() {
    let out = twistcalc(&["comm", "a", "x1", "x2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn expressions_may_nest_deformed_products() {
    let out = twistcalc(&["star", "a", "star(x1, x2)", "x3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("x1*x2*x3"));
}

#[test]
fn parse_errors_carry_one_based_columns_and_exit_2() {
    let out = twistcalc(&["star", "a", "star(x1, ", "x2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("column 10"), "stderr: {}", stderr(&out));
}

#[test]
fn unknown_family_is_a_usage_error() {
    let out = twistcalc(&["verify", "z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown family"));
}

#[test]
fn unknown_generator_names_the_family_context() {
    let out = twistcalc(&["star", "a", "y1", "y2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown generator"));
}

#[test]
fn paper_letter_aliases_reach_the_hyperboloid_chart() {
    let direct = twistcalc(&["star", "fgh", "y1", "y2"]);
    let alias = twistcalc(&["star", "h", "y1", "y2"]);
    assert_eq!(direct.status.code(), Some(0));
    assert_eq!(stdout(&direct), "y1*y2 - i*nu*y1^2\n");
    assert_eq!(stdout(&alias), stdout(&direct));
}

#[test]
fn verify_family_a_is_clean() {
    let out = twistcalc(&["verify", "a", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema"], "twistcalc/1");
    assert_eq!(doc["clean"], true);
    assert_eq!(doc["report"]["summary"]["fail"], 0);
    assert_eq!(doc["report"]["summary"]["discrepancy"], 2);
    let sanctioned = doc["sanctioned_discrepancies"].as_array().expect("list");
    assert_eq!(sanctioned.len(), 2);
}

#[test]
fn verify_scopes_sanctioned_divergences_to_the_family() {
    // Family d records no divergences, so a clean run must not demand the
    // parabolic-cylinder ones.
    let out = twistcalc(&["verify", "d", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["clean"], true);
    assert_eq!(doc["report"]["summary"]["discrepancy"], 0);
    assert_eq!(doc["sanctioned_discrepancies"].as_array().unwrap().len(), 0);
}

#[test]
fn table_lists_every_row_in_its_recorded_state() {
    let out = twistcalc(&["table", "a"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("star(x1,x2) = x1*x2 - i*nu*b^2   [ok]"));
    assert!(text.contains("candidate: engine differs, as recorded"));
    assert!(text.contains("recorded engine value"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn table_latex_reproduces_relation_blocks() {
    let out = twistcalc(&["table", "a", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\\begin{align*}"));
    assert!(text.contains("x^{1} \\star x^{2} &= x^{1} x^{2} - i \\nu b^{2} \\\\"));
    assert!(text.contains("\\left(x^{1}\\right)^{*_\\star} &= x^{1}"));
}

#[test]
fn table_json_rows_agree() {
    let out = twistcalc(&["table", "a", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["command"], "table");
    let tables = doc["tables"].as_array().expect("tables");
    assert_eq!(tables.len(), 1);
    for row in tables[0]["rows"].as_array().expect("rows") {
        assert_eq!(row["ok"], true, "row not in recorded state: {}", row);
    }
}

#[test]
fn cone_table_shows_q_monomial_relations() {
    let out = twistcalc(&["table", "h", "--twist", "dilation"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("star(y1,y2) = q*star(y2,y1)   [ok]"));
    assert!(text.contains("tinv(y1) = (1/q)*y1   [ok]"));
}

#[test]
fn geometry_cylinder_suite_is_clean() {
    let out = twistcalc(&["geometry", "c"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("19 pass, 0 fail"));
    assert!(text.contains("verdict: clean"));
}

#[test]
fn geometry_refuses_the_apex_twist() {
    let out = twistcalc(&["geometry", "fgh", "--twist", "dilation"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("normal projection undefined"));
}

#[test]
fn conflicting_cone_parameter_binding_is_rejected() {
    let out = twistcalc(&["table", "fgh", "--param", "c=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("must be 0 for twist dilation"));
}

#[test]
fn hilbert_counts_are_invariant() {
    let out = twistcalc(&["hilbert", "a", "--max-degree", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["clean"], true);
    assert_eq!(doc["report"]["summary"]["fail"], 0);
}

#[test]
fn safety_cap_override_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_twistcalc"))
        .args(["star", "fgh", "y1", "y2"])
        .env("TWISTCALC_SAFETY_CAP", "1")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("safety cap 1"));
}

#[test]
fn output_is_byte_deterministic() {
    let first = twistcalc(&["table", "a", "--format", "json"]);
    let second = twistcalc(&["table", "a", "--format", "json"]);
    assert_eq!(first.stdout, second.stdout);
    let v1 = twistcalc(&["verify", "a"]);
    let v2 = twistcalc(&["verify", "a"]);
    assert_eq!(v1.stdout, v2.stdout);
}
