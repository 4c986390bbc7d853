use std::path::{Path, PathBuf};
use std::process::Command;

use qmeas_cli::files::{decode_matrix, ModelFile, OperatorSetFile, SetKind};
use qmeas_cli::run;
use qmeas_core::measurement::validate_pvm;
use qmeas_core::{ComplexMatrix, Tolerance};
use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn qmeas(args: &[&str]) -> (Value, u8, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let r = run(&argv);
    let stderr = String::from_utf8(r.stderr).unwrap();
    let report = if r.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&r.stdout).unwrap()
    };
    (report, r.code, stderr)
}

fn probs(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|e| e["probability"].as_f64().unwrap())
        .collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn validate_exit_codes() {
    let (r, code, _) = qmeas(&["validate", &data("computational2.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["valid"], true);

    let (r, code, stderr) = qmeas(&["validate", &data("incomplete.json")]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "IncompleteResolution");
    assert_eq!(r["result"]["violation"]["kind"], "IncompleteResolution");
    assert!((r["result"]["identity_residual"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!(stderr.contains("IncompleteResolution"));

    let (r, code, stderr) = qmeas(&["validate", &data("malformed.json")]);
    assert_eq!(code, 1);
    assert!(r.is_null());
    assert!(stderr.contains("line 1 column"), "{stderr}");
}

#[test]
fn validate_names_first_violation() {
    let dir = tempfile::tempdir().unwrap();
    let not_projector = write(
        dir.path(),
        "p.json",
        r#"{"schema_version":"1","kind":"pvm","dim":2,"outcomes":[
            {"label":"a","matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]},
            {"label":"b","matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}]}"#,
    );
    let (r, code, _) = qmeas(&["validate", &not_projector]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "NotIdempotent");
    // the same operators are a valid POVM
    let as_povm = write(
        dir.path(),
        "q.json",
        &std::fs::read_to_string(&not_projector).unwrap().replace("pvm", "povm"),
    );
    assert_eq!(qmeas(&["validate", &as_povm]).1, 0);

    let duplicate = write(
        dir.path(),
        "d.json",
        r#"{"schema_version":"1","kind":"povm","dim":1,"outcomes":[
            {"label":"x","matrix":[[[0.5,0]]]},{"label":"x","matrix":[[[0.5,0]]]}]}"#,
    );
    assert_eq!(qmeas(&["validate", &duplicate]).0["error"]["kind"], "DuplicateLabel");

    let wrong_dim = write(
        dir.path(),
        "w.json",
        r#"{"schema_version":"1","kind":"povm","dim":3,"outcomes":[{"label":"x","matrix":[[[1,0]]]}]}"#,
    );
    let (r, code, _) = qmeas(&["validate", &wrong_dim]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "ShapeMismatch");
}

#[test]
fn tolerance_flags_change_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let nearly = write(
        dir.path(),
        "n.json",
        r#"{"schema_version":"1","kind":"povm","dim":1,"outcomes":[
            {"label":"a","matrix":[[[0.5,0]]]},{"label":"b","matrix":[[[0.5000001,0]]]}]}"#,
    );
    assert_eq!(qmeas(&["validate", &nearly]).1, 2);
    assert_eq!(qmeas(&["validate", &nearly, "--tol-abs", "1e-6"]).1, 0);
    assert_eq!(qmeas(&["validate", &nearly, "--tol-abs", "-1"]).1, 1);
}

#[test]
fn measure_trine_on_zero() {
    let (r, code, _) = qmeas(&["measure", &data("trine.json"), &data("ket0.json")]);
    assert_eq!(code, 0);
    assert!(close(
        &probs(&r["result"]["distribution"]),
        &[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
        1e-12
    ));

    let (mixed, code, _) = qmeas(&["measure", &data("trine.json"), &data("ket0.json"), "--mixed"]);
    assert_eq!(code, 0);
    assert_eq!(mixed["result"]["state_kind"], "density");
    assert!(close(
        &probs(&mixed["result"]["distribution"]),
        &probs(&r["result"]["distribution"]),
        1e-12
    ));

    let (r, _, _) = qmeas(&["measure", &data("trine.json"), &data("mixed.json")]);
    assert!(close(&probs(&r["result"]["distribution"]), &[1.0 / 3.0; 3], 1e-12));
}

#[test]
fn measure_sampling_is_reproducible() {
    let args = [
        "measure",
        &data("trine.json"),
        &data("ket0.json"),
        "--sample=100000",
        "--seed=7",
    ]
    .map(String::from);
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a, b);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    let counts: Vec<u64> = r["result"]["sample"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts.iter().sum::<u64>(), 100_000);
    let sigma = (100_000.0f64 * (2.0 / 3.0) * (1.0 / 3.0)).sqrt();
    assert!((counts[0] as f64 - 100_000.0 * 2.0 / 3.0).abs() < 4.0 * sigma);
    let other = run(&[
        "measure",
        &data("trine.json"),
        &data("ket0.json"),
        "--sample=100000",
        "--seed=8",
    ]
    .map(String::from));
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn measure_post_states() {
    let (r, code, _) = qmeas(&[
        "measure",
        &data("computational2.json"),
        &data("plus.json"),
        "--post",
        "1",
    ]);
    assert_eq!(code, 0);
    let post = &r["result"]["post"];
    assert_eq!(post["state"]["kind"], "pure");
    assert_eq!(post["state"]["amplitudes"][1][0].as_f64().unwrap(), 1.0);
    assert!((post["probability"].as_f64().unwrap() - 0.5).abs() < 1e-15);

    let (r, code, _) = qmeas(&["measure", &data("trine.json"), &data("ket0.json"), "--post", "0"]);
    assert_eq!(code, 0);
    let m = &r["result"]["post"]["state"]["matrix"];
    assert!((m[0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let (r, code, _) = qmeas(&[
        "measure",
        &data("computational2.json"),
        &data("ket0.json"),
        "--post",
        "1",
    ]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "ZeroProbabilityOutcome");

    let (r, code, _) = qmeas(&[
        "measure",
        &data("computational2.json"),
        &data("ket0.json"),
        "--post",
        "7",
    ]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "UnknownLabel");
}

#[test]
fn measure_dimension_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let qutrit = write(
        dir.path(),
        "s.json",
        r#"{"schema_version":"1","kind":"pure","dim":3,"amplitudes":[[1,0],[0,0],[0,0]]}"#,
    );
    let (r, code, _) = qmeas(&["measure", &data("trine.json"), &qutrit]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "ShapeMismatch");

    let unnormalized = write(
        dir.path(),
        "u.json",
        r#"{"schema_version":"1","kind":"pure","dim":2,"amplitudes":[[1,0],[1,0]]}"#,
    );
    assert_eq!(
        qmeas(&["measure", &data("trine.json"), &unnormalized]).0["error"]["kind"],
        "NotNormalized"
    );
}

#[test]
fn discriminate_examples() {
    let (r, code, _) = qmeas(&["discriminate", "--psi", &data("ket0.json"), "--phi", &data("plus.json")]);
    assert_eq!(code, 0);
    let a = r["result"]["a"].as_f64().unwrap();
    assert!((a - 1.0 / (1.0 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
    assert!((a - 0.585786).abs() < 1e-6);
    assert_eq!(r["result"]["operators"][2]["verdict"], "Inconclusive");

    let (r, code, _) = qmeas(&[
        "discriminate",
        "--psi",
        &data("ket0.json"),
        "--phi",
        &data("plus.json"),
        "--a",
        "0.9",
    ]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "InfeasibleParameter");

    let (r, code, _) = qmeas(&[
        "discriminate",
        "--psi",
        &data("ket0.json"),
        "--phi",
        &data("ket1.json"),
        "--a",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!(close(&probs(&r["result"]["given_psi"]), &[0.0, 1.0, 0.0], 1e-15));
    assert!(close(&probs(&r["result"]["given_phi"]), &[1.0, 0.0, 0.0], 1e-15));

    let (r, code, _) = qmeas(&["discriminate", "--psi", &data("ket0.json"), "--phi", &data("ket0.json")]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "ParallelStates");

    let (_, code, _) = qmeas(&[
        "discriminate",
        "--psi",
        &data("mixed.json"),
        "--phi",
        &data("ket0.json"),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn discriminate_trials() {
    let args = [
        "discriminate",
        "--psi",
        &data("ket0.json"),
        "--phi",
        &data("plus.json"),
        "--a",
        "0.5",
        "--trials",
        "20000",
        "--seed",
        "5",
    ];
    let (r, code, _) = qmeas(&args);
    assert_eq!(code, 0);
    let trials = r["result"]["trials"].as_array().unwrap();
    assert_eq!(trials.len(), 2);
    for t in trials {
        assert_eq!(t["wrong_conclusive"], 0);
        assert_eq!(t["trials"], 20000);
        let rate = t["conclusive_rate"].as_f64().unwrap();
        assert!((rate - 0.25).abs() < 4.0 * (0.25f64 * 0.75 / 20000.0).sqrt());
    }
    assert_eq!(trials[1]["seed"], 6);
}

fn load_pvm(path: &Path) -> Vec<qmeas_core::Outcome> {
    let file: OperatorSetFile = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(file.kind, SetKind::Pvm);
    file.decode().unwrap()
}

#[test]
fn dilate_trine() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pvm.json");
    let (r, code, _) = qmeas(&["dilate", &data("trine.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["enlarged_dim"], 3);
    assert_eq!(r["result"]["fine_outcomes"], 3);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["passed"], true, "{c}");
    }
    let pvm = load_pvm(&out);
    assert_eq!(pvm.len(), 3);
    assert!(validate_pvm(pvm, Tolerance::default()).is_ok());
    assert_eq!(qmeas(&["validate", out.to_str().unwrap()]).1, 0);

    let mapping: Value = serde_json::from_slice(&std::fs::read(dir.path().join("pvm.mapping.json")).unwrap()).unwrap();
    assert_eq!(mapping["fine_to_coarse"].as_array().unwrap().len(), 3);
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(mapping["subspace_projector"].clone()).unwrap();
    let pu = decode_matrix(&rows, "p").unwrap();
    assert!((&pu * &pu).max_abs_diff(&pu) < 1e-12);
    assert!((pu.trace().re - 2.0).abs() < 1e-12);
}

#[test]
fn dilate_pvm_keeps_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let mapping = dir.path().join("map.json");
    let (r, code, _) = qmeas(&[
        "dilate",
        &data("computational2.json"),
        "--out",
        out.to_str().unwrap(),
        "--mapping",
        mapping.to_str().unwrap(),
        "--verify-trials",
        "0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["enlarged_dim"], 2);
    assert!(r["result"]["residuals"]["max_probability_discrepancy"].is_null());
    assert!(mapping.exists());
    let pvm = load_pvm(&out);
    for (o, i) in pvm.iter().zip(0..) {
        let mut e = ComplexMatrix::zeros(2, 2);
        e = &e
            + &ComplexMatrix::outer(
                qmeas_core::PureState::basis(2, i).unwrap().amplitudes(),
                qmeas_core::PureState::basis(2, i).unwrap().amplitudes(),
            );
        // rank-one projectors onto basis vectors, up to rounding
        assert!(o.operator.max_abs_diff(&e) < 1e-12);
    }
}

#[test]
fn dilate_corrupt_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"schema_version\": \"1\", \"kind\": ");
    let (r, code, stderr) = qmeas(&["dilate", &bad]);
    assert_eq!(code, 1);
    assert!(r.is_null());
    assert!(stderr.contains("EOF"), "{stderr}");
}

#[test]
fn realize_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("model.json");
    let (r, code, _) = qmeas(&["realize", &data("trine.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(r["result"]["round_trip_max"].as_f64().unwrap() <= 1e-9);
    let model: ModelFile = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(model.unitary.len(), 6);
    assert!(model.unitary.iter().all(|row| row.len() == 6));
    let m = model.to_model(Tolerance::default()).unwrap().unwrap();
    assert!(m.unitarity_residual() <= 1e-10);

    let out = dir.path().join("id.json");
    assert_eq!(
        qmeas(&["realize", &data("identity.json"), "--out", out.to_str().unwrap()]).1,
        0
    );
    let model: ModelFile = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let u = decode_matrix(&model.unitary, "u").unwrap();
    assert_eq!(u, ComplexMatrix::identity(2));

    let (r, code, _) = qmeas(&["realize", &data("halves.json")]);
    assert_eq!(code, 0);
    assert_eq!(
        r["result"]["system_dim"].as_u64().unwrap() * r["result"]["ancilla_dim"].as_u64().unwrap(),
        4
    );
}

#[test]
fn realize_accepts_kraus_files() {
    let dir = tempfile::tempdir().unwrap();
    // amplitude damping with γ = 0.36
    let kraus = write(
        dir.path(),
        "k.json",
        r#"{"schema_version":"1","kind":"kraus","dim":2,"outcomes":[
            {"label":"keep","matrix":[[[1,0],[0,0]],[[0,0],[0.8,0]]]},
            {"label":"decay","matrix":[[[0,0],[0.6,0]],[[0,0],[0,0]]]}]}"#,
    );
    let (r, code, _) = qmeas(&["realize", &kraus]);
    assert_eq!(code, 0, "{r}");
    assert!(r["result"]["round_trip_max"].as_f64().unwrap() <= 1e-12);
    let (r, code, _) = qmeas(&["measure", &kraus, &data("ket1.json"), "--post", "decay"]);
    assert_eq!(code, 0);
    assert!((r["result"]["distribution"][1]["probability"].as_f64().unwrap() - 0.36).abs() < 1e-15);
    assert!((r["result"]["post"]["state"]["matrix"][0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn malformed_inputs_never_panic() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "",
        "\u{0}\u{1}garbage",
        "[]",
        "{}",
        r#"{"schema_version":"2","kind":"povm","dim":1,"outcomes":[{"label":"a","matrix":[[[1,0]]]}]}"#,
        r#"{"schema_version":"1","kind":"density","dim":1,"outcomes":[]}"#,
        r#"{"schema_version":"1","kind":"povm","dim":1,"outcomes":[]}"#,
        r#"{"schema_version":"1","kind":"povm","dim":1,"outcomes":[{"label":"a","matrix":[]}]}"#,
        r#"{"schema_version":"1","kind":"povm","dim":1,"outcomes":[{"label":"a","matrix":[[[1,0,0]]]}]}"#,
        r#"{"schema_version":"1","kind":"povm","dim":2,"outcomes":[{"label":"a","matrix":[[[1,0],[0,0]],[[0,0]]]}]}"#,
        r#"{"schema_version":"1","kind":"povm","dim":1,"outcomes":[{"label":"a","matrix":[[[1e999,0]]]}]}"#,
        r#"{"schema_version":"1","kind":"povm","dim":1,"outcomes":[{"label":"a","matrix":[[[1,0]]],"extra":1}]}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        let path = write(dir.path(), &format!("c{i}.json"), text);
        for cmd in ["validate", "dilate", "realize"] {
            let (r, code, stderr) = qmeas(&[cmd, &path]);
            assert!(code == 1 || code == 2, "case {i} {cmd}: exit {code}");
            assert!(!stderr.is_empty(), "case {i} {cmd}");
            if code == 1 {
                assert!(r.is_null());
            }
        }
        let (_, code, _) = qmeas(&["measure", &data("trine.json"), &path]);
        assert!(code == 1 || code == 2, "case {i} as state");
    }
    assert_eq!(qmeas(&["validate", "/definitely/not/here.json"]).1, 1);
    assert_eq!(qmeas(&["frobnicate"]).1, 1);
    assert_eq!(qmeas(&["measure", &data("trine.json")]).1, 1);
    assert_eq!(
        qmeas(&["measure", &data("trine.json"), &data("ket0.json"), "--sample", "-3"]).1,
        1
    );
}

#[test]
fn help_and_version_succeed() {
    let r = run(&["--help".to_string()]);
    assert_eq!(r.code, 0);
    assert!(String::from_utf8(r.stdout).unwrap().contains("dilate"));
    assert_eq!(run(&["--version".to_string()]).code, 0);
}

#[test]
fn timing_is_opt_in() {
    let (r, _, _) = qmeas(&["validate", &data("trine.json")]);
    assert!(r.get("wall_time_seconds").is_none());
    let (r, _, _) = qmeas(&["--timing", "validate", &data("trine.json")]);
    assert!(r["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn binary_streams_and_exit_status() {
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_qmeas"));
    let out = Command::new(&bin)
        .args(["validate", &data("incomplete.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "failed");
    assert!(String::from_utf8_lossy(&out.stderr).contains("IncompleteResolution"));

    let out = Command::new(&bin)
        .args(["validate", &data("malformed.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn report_floats_have_seventeen_digits() {
    let r = run(&["measure", &data("trine.json"), &data("ket0.json")].map(String::from));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("\"probability\": 6.6666666666666663e-1"), "{text}");
}
