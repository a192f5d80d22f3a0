use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Stdio};

use cdga::constructions::{q_model, s1s2_bundle_cp2_model};
use cdga::{q, Model, Rational};
use cdga_cli::model_file::{self, Metadata};
use proptest::prelude::*;
use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: String,
    json: Value,
}

fn cdga(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cdga"));
    cmd.args(args)
        .env_remove("CDGA_MAX_DEGREE_DEFAULT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn cdga");
    child
        .stdin
        .take()
        .expect("stdin")
        .write_all(stdin.as_bytes())
        .expect("write stdin");
    let out = child.wait_with_output().expect("wait");
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().expect("exit code"),
        stdout,
        json,
    }
}

const CP2: &str = r#"{
  "schema": 1,
  "generators": [{"name": "a", "degree": 2}, {"name": "x", "degree": 5}],
  "differential": {"x": "a^3"}
}"#;

#[test]
fn q111_massey_from_a_corpus_pipe() {
    let model = cdga(&["corpus", "q111"], "", &[]);
    assert_eq!(model.code, 0);
    let r = cdga(&["massey", "-", "--classes", "a2,a2,a3", "--max-degree", "7"], &model.stdout, &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["result"]["defined"], json!(true));
    assert_eq!(r.json["result"]["vanishes"], json!(false));
    assert_eq!(r.json["result"]["indeterminacy"]["dimension"], json!(0));
    assert_eq!(r.json["schema"], json!(1));
    assert_eq!(r.json["input_digest"].as_str().map(str::len), Some(64));
}

#[test]
fn berger_is_formal() {
    let model = cdga(&["corpus", "berger"], "", &[]);
    let r = cdga(&["formality", "-", "--dimension", "7"], &model.stdout, &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["result"]["status"], json!("Formal"));
}

#[test]
fn three_sphere_is_formal() {
    let s3 = r#"{"schema": 1, "generators": [{"name": "u", "degree": 3}], "differential": {}}"#;
    let r = cdga(&["formality", "-", "--dimension", "3"], s3, &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["result"]["status"], json!("Formal"));
}

#[test]
fn cp2_file() {
    let r = cdga(&["cohomology", "-", "--max-degree", "6", "--ring"], CP2, &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["result"]["betti"], json!([1, 0, 1, 0, 1, 0, 0]));
    assert!(r.json["result"]["cup"].is_array());
}

#[test]
fn q111_from_parameters() {
    let src = r#"{
      "schema": 1,
      "generators": [
        {"name": "a1", "degree": 2}, {"name": "a2", "degree": 2}, {"name": "a3", "degree": 2},
        {"name": "x1", "degree": 3}, {"name": "x2", "degree": 3}, {"name": "x3", "degree": 3},
        {"name": "y", "degree": 1}
      ],
      "differential": {"x1": "a1^2", "x2": "a2^2", "x3": "a3^2", "y": "e1*a1 + e2*a2 + e3*a3"},
      "parameters": {"e1": "1", "e2": "1", "e3": "1"}
    }"#;
    let r = cdga(&["cohomology", "-", "--max-degree", "7"], src, &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["result"]["betti"], json!([1, 0, 2, 0, 0, 2, 0, 1]));
}

#[test]
fn wrong_degree_names_the_term() {
    let src = r#"{
      "schema": 1,
      "generators": [{"name": "a", "degree": 2}, {"name": "b", "degree": 2}, {"name": "x", "degree": 3}],
      "differential": {"x": "a^2 + b"}
    }"#;
    let r = cdga(&["validate", "-"], src, &[]);
    assert_eq!(r.code, 1);
    let e = &r.json["error"];
    assert_eq!(e["kind"], json!("WrongDegree"));
    assert!(e["detail"].as_str().unwrap().contains('b'), "{e}");
    assert_eq!(e["location"]["line"], json!(4));
}

#[test]
fn undefined_massey_exits_2() {
    let r = cdga(&["massey", "-", "--classes", "a,a,a"], CP2, &[]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert_eq!(r.json["result"]["defined"], json!(false));
}

#[test]
fn minimal_model_needs_simple_connectivity() {
    let model = cdga(&["corpus", "s1s2", "--e", "0"], "", &[]);
    let r = cdga(&["minimal-model", "-"], &model.stdout, &[]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert_eq!(r.json["result"]["applicable"], json!(false));
}

#[test]
fn errors_carry_locations() {
    let r = cdga(&["validate", "-"], "{\n  \"schema\": 1,\n  \"generators\": [\n", &[]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["error"]["kind"], json!("SyntaxError"));
    assert!(r.json["error"]["location"]["line"].is_u64());

    let unknown = r#"{"schema": 1, "generators": [{"name": "a", "degree": 2}, {"name": "x", "degree": 5}], "differential": {"x": "a^2*z"}}"#;
    let r = cdga(&["validate", "-"], unknown, &[]);
    assert_eq!(r.json["error"]["kind"], json!("UnknownIdentifier"));
    assert!(r.json["error"]["location"]["column"].is_u64());
}

#[test]
fn max_degree_default_chain() {
    let betti_len = |args: &[&str], env: &[(&str, &str)]| {
        let r = cdga(args, CP2, env);
        r.json["result"]["betti"].as_array().map(Vec::len)
    };
    assert_eq!(betti_len(&["cohomology", "-"], &[]), Some(9));
    assert_eq!(betti_len(&["cohomology", "-"], &[("CDGA_MAX_DEGREE_DEFAULT", "3")]), Some(4));
    assert_eq!(
        betti_len(&["cohomology", "-", "--max-degree", "5"], &[("CDGA_MAX_DEGREE_DEFAULT", "3")]),
        Some(6)
    );
    let with_meta = CP2.replacen('{', r#"{"metadata": {"formal_dimension": 4},"#, 1);
    let r = cdga(&["cohomology", "-"], &with_meta, &[]);
    assert_eq!(r.json["result"]["betti"].as_array().map(Vec::len), Some(5));
}

#[test]
fn mapping_torus_of_the_q111_swap() {
    let dir = std::env::temp_dir().join(format!("cdga-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let auto = dir.join("swap.json");
    std::fs::write(&auto, r#"{"schema": 1, "generators": {"a1": "a2", "a2": "a1", "x1": "x2", "x2": "x1"}}"#).unwrap();
    let model = cdga(&["corpus", "q111"], "", &[]);
    let r = cdga(
        &["mapping-torus", "-", "--auto", auto.to_str().unwrap(), "--dimension", "8"],
        &model.stdout,
        &[],
    );
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["result"]["order"], json!(2));
    let betti: Vec<u64> = r.json["result"]["betti"].as_array().unwrap().iter().map(|b| b.as_u64().unwrap()).collect();
    assert_eq!(betti[..5], [1, 1, 1, 1, 0]);
    assert_eq!(r.json["result"]["formality"]["status"], json!("Formal"));
}

#[test]
fn circle_bundle_reproduces_q111() {
    let model = cdga(&["corpus", "s2-cubed"], "", &[]);
    let bundle = cdga(&["circle-bundle", "-", "--euler", "a1 + a2 + a3"], &model.stdout, &[]);
    assert_eq!(bundle.code, 0, "{}", bundle.stdout);
    let r = cdga(&["cohomology", "-", "--max-degree", "7"], &bundle.stdout, &[]);
    assert_eq!(r.json["result"]["betti"], json!([1, 0, 2, 0, 0, 2, 0, 1]));
}

fn round_trip(model: &Model) {
    let meta = Metadata {
        formal_dimension: Some(7),
        provenance: vec!["test".into()],
    };
    let rendered = model_file::render(model, &BTreeMap::new(), &meta);
    let text = serde_json::to_string_pretty(&rendered).unwrap();
    let loaded = model_file::parse_str(&text).unwrap();
    let again = model_file::render(&loaded.model, &loaded.parameters, &loaded.metadata);
    assert_eq!(rendered, again);
}

proptest! {
    #[test]
    fn parse_render_round_trip(
        e in prop::collection::vec((-9i64..=9, 1i64..=5), 3),
        s in (-3i64..=3, -3i64..=3, -3i64..=3),
    ) {
        let e: Vec<Rational> = e.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect();
        round_trip(&Model::Free(q_model([e[0].clone(), e[1].clone(), e[2].clone()])));
        round_trip(&Model::Free(s1s2_bundle_cp2_model(&q(s.0), &q(s.1), &q(s.2)).0));
    }
}
