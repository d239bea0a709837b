mod common;

use std::process::Command;

use depthzero::calc::{
    default_table, emit_report, load_spec, parse_parameter_table, parse_spec, run_pipeline, EmitMode, TableKey,
};
use depthzero::rational::q;
use depthzero::Error;

fn dzcalc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dzcalc")).args(args).output().expect("dzcalc runs")
}

fn fixture_arg(name: &str) -> String {
    common::fixture(name).to_str().unwrap().to_string()
}

#[test]
fn every_fixture_loads_and_runs() {
    for name in common::valid_fixtures() {
        let spec = common::load(&name);
        assert_eq!(spec.name, name);
        let r = run_pipeline(&spec, &default_table()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(r.certificate.h_theta_subset_h);
        assert!(r.walls.iter().all(|w| ["resolved", "table-miss", "not-decidable"].contains(&w.status.as_str())));
        assert!(r.wall_classes.iter().all(|c| !c.walls.is_empty()));
    }
}

#[test]
fn sl2_iwahori_block() {
    let r = run_pipeline(&common::load("sl2_iwahori"), &default_table()).unwrap();
    assert_eq!(r.wall_classes.len(), 1);
    let c = &r.wall_classes[0];
    assert_eq!(c.q_s.value.as_deref(), Some("3"));
    assert_eq!(c.relevant, Some(true));
    assert_eq!(r.hecke.type_label, "~A1");
    assert_eq!(r.hecke.coxeter_matrix, vec![vec![1, 0], vec![0, 1]]);
    assert_eq!(r.hecke.parameters, vec![Some("q".to_string()); 2]);
}

#[test]
fn quadratic_and_supercuspidal_shapes() {
    let r = run_pipeline(&common::load("sl2_quadratic"), &default_table()).unwrap();
    assert_eq!(r.phi_theta.count, 0);
    assert_eq!(r.hecke.rank, 0);
    assert_eq!(r.hecke.type_label, "trivial");
    let g = run_pipeline(&common::load("sl2_levi_g"), &default_table()).unwrap();
    assert!(g.walls.is_empty());
    assert_eq!(g.hecke.rank, 0);
    assert_eq!(g.apartment.dim, 0);
}

#[test]
fn omega_is_passed_through() {
    let r = run_pipeline(&common::load("pgl2_iwahori"), &default_table()).unwrap();
    assert_eq!(r.hecke.omega.order, 2);
    assert_eq!(r.hecke.parameter_check, "ok");
}

#[test]
fn swapped_pair_has_parameter_q_squared() {
    let r = run_pipeline(&common::load("sl2xsl2_swap"), &default_table()).unwrap();
    for w in &r.walls {
        assert_eq!(w.g_side.group_type, "A1xA1");
        assert_eq!(w.q_s.symbolic.as_deref(), Some("q^2"));
        assert_eq!(w.q_s.value.as_deref(), Some("4"));
    }
    assert!(r.oracle_checks.iter().all(|c| c.agree));
}

#[test]
fn unresolved_walls_are_marked() {
    let su3 = run_pipeline(&common::load("su3_unramified"), &default_table()).unwrap();
    let miss: Vec<_> = su3.walls.iter().filter(|w| w.status == "table-miss").collect();
    assert_eq!(miss.len(), 1);
    assert_eq!(miss[0].theta_side.group_type, "2A2");
    assert_eq!(miss[0].relevant, None);
    assert_eq!(su3.hecke.parameter_check, "incomplete");
}

#[test]
fn table_rows_resolve_levi_walls() {
    let spec = common::load("gl3_levi_gl2");
    let t = parse_parameter_table(
        r#"{"schema_version": 1, "entries": [
            {"group_type": "A2", "levi_type": "A1", "cuspidal": "trivial", "exponent": "2", "provenance": "test row"}
        ]}"#,
    )
    .unwrap();
    let key = TableKey { group_type: "A2".into(), levi_type: "A1".into(), cuspidal: "trivial".into() };
    assert_eq!(t.get(&key).unwrap().exponent, q(2));
    let r = run_pipeline(&spec, &t).unwrap();
    for w in &r.walls {
        assert_eq!(w.q_s.source, "table");
        assert_eq!(w.q_s.provenance.as_deref(), Some("test row"));
        assert_eq!(w.q_s.value.as_deref(), Some("4"));
    }
    assert_eq!(r.hecke.parameter_check, "ok");
    let empty = run_pipeline(&spec, &parse_parameter_table("").unwrap()).unwrap();
    assert!(empty.walls.iter().all(|w| w.status == "table-miss"));
}

#[test]
fn machine_report_shape_and_determinism() {
    let spec = common::load("sl2_iwahori");
    let a = emit_report(&run_pipeline(&spec, &default_table()).unwrap(), EmitMode::Machine);
    let b = emit_report(&run_pipeline(&spec, &default_table()).unwrap(), EmitMode::Machine);
    assert_eq!(a, b);
    for field in ["\"walls\"", "\"q_s\"", "\"coxeter_matrix\"", "\"schema_version\""] {
        assert!(a.contains(field), "{field}");
    }
    let torus = emit_report(&run_pipeline(&common::load("torus"), &default_table()).unwrap(), EmitMode::Machine);
    let v: serde_json::Value = serde_json::from_str(&torus).unwrap();
    assert_eq!(v["walls"], serde_json::json!([]));
}

#[test]
fn spec_errors() {
    assert!(matches!(load_spec(std::path::Path::new("/nonexistent/spec.json")), Err(Error::Io(_))));
    let e = parse_spec("{\"schema_version\": 2, \"root_datum\": {\"rank\": 0, \"roots\": [], \"coroots\": []}, \"theta\": [], \"x0\": []}")
        .unwrap_err();
    assert!(e.to_string().contains("schema_version"));
    let on_wall = std::fs::read_to_string(common::fixture("sl2_iwahori")).unwrap().replace("1/5", "1/2");
    let spec = parse_spec(&on_wall).unwrap();
    assert!(matches!(run_pipeline(&spec, &default_table()), Err(Error::NotGeneric(_))));
}

#[test]
fn cli_exit_codes_and_output() {
    let ok = dzcalc(&["--spec", &fixture_arg("sl2_iwahori"), "--emit", "machine"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["q"], serde_json::json!(3));

    let q5 = dzcalc(&["--spec", &fixture_arg("sl2_iwahori"), "--emit", "machine", "--q", "5"]);
    let v: serde_json::Value = serde_json::from_slice(&q5.stdout).unwrap();
    assert_eq!(v["walls"][0]["q_s"]["value"], serde_json::json!("5"));

    assert_eq!(dzcalc(&["--spec", &fixture_arg("sl2_iwahori"), "--q", "6"]).status.code(), Some(1));
    assert_eq!(dzcalc(&["--spec", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(dzcalc(&["--spec", &fixture_arg("certificate_probe")]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.json");
    let row = r#"{"group_type": "A1", "levi_type": "T", "cuspidal": "trivial", "exponent": "1", "provenance": "x"}"#;
    std::fs::write(&dup, format!("{{\"schema_version\": 1, \"entries\": [{row}, {row}]}}")).unwrap();
    let bad_table = dzcalc(&["--spec", &fixture_arg("sl2_iwahori"), "--table", dup.to_str().unwrap()]);
    assert_eq!(bad_table.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_table.stderr).contains("duplicate"));

    let out = dir.path().join("report.txt");
    let written = dzcalc(&["--spec", &fixture_arg("sl2_iwahori"), "--check-oracle", "--out", out.to_str().unwrap()]);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("Hecke algebra: type ~A1"));
    assert!(text.contains("oracle:"));
}
