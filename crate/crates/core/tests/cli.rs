use std::process::{Command, Output};

fn solvmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solvmin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_all_exits_zero() {
    let o = solvmin(&["verify", "--all", "--format", "csv"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert_eq!(
        out.lines().next(),
        Some("family,a,lambda,is_soliton,soliton_residual,H_norm,orbit_dim,agrees")
    );
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn json_is_byte_stable() {
    let args = [
        "verify", "--family", "r3a", "--a", "0.5", "--grid", "-1:1:5",
    ];
    let (a, b) = (solvmin(&args), solvmin(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 5);
    assert_eq!(rows[2]["is_soliton"], true);
    assert_eq!(rows[2]["lambda"], 0.0);
    assert!(rows[0].get("H_norm").is_some());
}

#[test]
fn invalid_config_exits_two() {
    for args in [
        &["verify", "--family", "r3pa", "--a", "1", "--lambda", "0.5"][..],
        &["verify", "--family", "r3", "--grid", "0:1:3"],
        &["verify", "--family", "r3", "--format", "xml"],
        &["verify", "--family", "r3a", "--a", "2"],
        &["verify", "--family", "r3", "--tol", "-1"],
        &["soliton", "--family", "r3", "--gram", "1", "0", "0"],
        &["orbit", "--family", "nope"],
    ] {
        assert_eq!(solvmin(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn disagreement_exits_one() {
    // a tolerance below the roundoff of the minimal orbit at λ = 1
    let o = solvmin(&[
        "verify", "--family", "r3pa", "--a", "2", "--lambda", "1", "--tol", "1e-300",
    ]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows[0]["soliton_residual"], 0.0);
    assert!(rows[0]["H_norm"].as_f64().unwrap() > 0.0);
    assert_eq!(rows[0]["agrees"], false);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn subcommands_report_json() {
    let der: serde_json::Value =
        serde_json::from_slice(&solvmin(&["der", "--family", "h3", "--exact"]).stdout).unwrap();
    assert_eq!(der["dim"], 6);
    let orbit: serde_json::Value = serde_json::from_slice(
        &solvmin(&["orbit", "--family", "r3pa", "--a", "2", "--lambda", "2"]).stdout,
    )
    .unwrap();
    assert!((orbit["H_norm"].as_f64().unwrap() - 2f64.sqrt() / 3.0).abs() < 1e-12);
    let red: serde_json::Value = serde_json::from_slice(
        &solvmin(&["reduce", "--family", "r3", "--gram", "1,0,0,0,1,0,0,0,4"]).stdout,
    )
    .unwrap();
    assert!((red["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let sol: serde_json::Value = serde_json::from_slice(
        &solvmin(&["soliton", "--family", "r3a:a=0.5", "--lambda", "0"]).stdout,
    )
    .unwrap();
    assert_eq!(sol["verdict"]["is_soliton"], true);
    assert!((sol["verdict"]["certificate"]["c"].as_f64().unwrap() + 1.25).abs() < 1e-12);
    let ric: serde_json::Value =
        serde_json::from_slice(&solvmin(&["ricci", "--family", "h3"]).stdout).unwrap();
    assert_eq!(ric["ric_frame"][2][2], 0.5);
    assert!(solvmin(&["families"]).status.success());
}

#[test]
fn gram_file_and_out() {
    let dir = std::env::temp_dir().join(format!("solvmin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let gram = dir.join("gram.json");
    std::fs::write(&gram, "[[1,0,0],[0,1,0],[0,0,4]]").unwrap();
    let out = dir.join("out.json");
    let o = solvmin(&[
        "reduce",
        "--family",
        "r3",
        "--gram-file",
        gram.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let red: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((red["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_lists_flags() {
    let h = stdout(&solvmin(&["verify", "--help"]));
    for flag in [
        "--family", "--a", "--lambda", "--grid", "--tol", "--format", "--exact", "--out", "--all",
    ] {
        assert!(h.contains(flag), "{flag}");
    }
    let h = stdout(&solvmin(&["orbit", "--help"]));
    for flag in ["--gram", "--gram-file", "--lambda"] {
        assert!(h.contains(flag), "{flag}");
    }
}
