use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_operadlab"))
        .args(args)
        .env_remove("OPERADLAB_SEED")
        .env_remove("OPERADLAB_TOL_GEO")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn composing_with_the_unit_returns_the_input() {
    let id = std::env::temp_dir().join("operadlab_cli_id.json");
    std::fs::write(&id, r#"{"disks": [{"c": [0.0, 0.0], "r": 1.0}]}"#).unwrap();
    let d = fixture("disks.json");
    let out = run(&["compose-disks", &d, "1", id.to_str().unwrap()], "");
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&d).unwrap()).unwrap();
    assert_eq!(json(&out), original);
}

#[test]
fn swiss_cheese_composition() {
    let sc = fixture("sc.json");
    let out = json(&run(
        &["compose-sc", &sc, "c", "1", &fixture("disks.json")],
        "",
    ));
    assert_eq!(out["closed_upper"].as_array().unwrap().len(), 2 + 4 - 1);
    let out = json(&run(&["compose-sc", &sc, "o", "2", &sc], ""));
    assert_eq!(out["open"].as_array().unwrap().len(), 3);
    assert_eq!(
        run(&["compose-sc", &sc, "x", "1", &sc], "").status.code(),
        Some(2)
    );
}

#[test]
fn strata_and_poset() {
    let out = json(&run(&["enumerate-strata", "4", "2"], ""));
    assert_eq!(out.as_array().unwrap().len(), 15);
    let dim = json(&run(
        &["stratum-dim"],
        r#"{"color":"c","children":[{"color":"c","children":[1,2]},3]}"#,
    ));
    assert_eq!(
        (dim["dimension"].as_u64(), dim["codimension"].as_u64()),
        (Some(2), Some(1))
    );
    let dot = run(&["poset", "3", "--format", "dot"], "");
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph") && text.matches("->").count() == 3);
    let poset = json(&run(&["poset", "3"], ""));
    assert_eq!(poset["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn charts_nu_and_mu() {
    let chart = fixture("chart.json");
    let a = json(&run(&["eval-chart", &chart], ""));
    let b = json(&run(&["eval-chart", &chart, "--staged"], ""));
    let pts = |v: &Value| -> Vec<f64> {
        v["interior"]["points"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|p| p.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
            .collect()
    };
    assert!(pts(&a)
        .iter()
        .zip(pts(&b))
        .all(|(x, y)| (x - y).abs() < 1e-9));
    let d = json(&run(&["apply-nu", &chart, "--bump", "smooth"], ""));
    assert_eq!(d["disks"].as_array().unwrap().len(), 5);
    let sc = json(&run(&["apply-mu", &fixture("colored_chart.json")], ""));
    assert_eq!(sc["closed_upper"].as_array().unwrap().len(), 2);
    assert_eq!(sc["open"].as_array().unwrap().len(), 2);
    // a collar wider than the chart allows is a domain error
    let out = run(&["apply-nu", &chart, "--epsilon", "100"], "");
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "parameter");
}

#[test]
fn render_produces_svg() {
    let out = run(
        &[
            "render",
            &fixture("sc.json"),
            "--width",
            "300",
            "--height",
            "200",
        ],
        "",
    );
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains(r#"width="300" height="200""#));
    assert_eq!(svg.matches("<line").count(), 1);
    let out = run(
        &["render", "--no-labels"],
        r#"{"disks": [{"c": [0.0, 0.0], "r": 0.5}]}"#,
    );
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("<circle").count(), 2);
    assert!(!svg.contains("<text"));
}

#[test]
fn random_and_seeds() {
    let a = run(&["random", "points", "4", "--seed", "3"], "");
    let b = Command::new(env!("CARGO_BIN_EXE_operadlab"))
        .args(["random", "points", "4"])
        .env("OPERADLAB_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    // the flag wins over the environment
    let c = Command::new(env!("CARGO_BIN_EXE_operadlab"))
        .args(["random", "points", "4", "--seed", "3"])
        .env("OPERADLAB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    let t = json(&run(&["random", "decorated-tree", "4", "--seed", "1"], ""));
    assert!(t["tree"].is_object() && t["decorations"].is_object());
}

#[test]
fn check_reports_and_exit_codes() {
    let out = json(&run(&["check", "--suite", "d2-axioms", "--seed", "7"], ""));
    assert_eq!(out["failures"].as_array().unwrap().len(), 0);
    assert_eq!(out["cases"], 1000);
    let out = run(&["normalize"], "not json");
    assert_eq!(out.status.code(), Some(1));
    assert!(serde_json::from_slice::<Value>(&out.stderr).is_ok());
    assert_eq!(run(&["poset"], "").status.code(), Some(2));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join("operadlab_cli_out.txt");
    let out = run(
        &[
            "enumerate-strata",
            "5",
            "3",
            "--count-only",
            "--out",
            path.to_str().unwrap(),
        ],
        "",
    );
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "105\n");
}
