use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use palm_nmf::{load_matrix, save_matrix};
use palm_nmf_core::harness::SyntheticSpec;
use palm_nmf_core::{matmul, Matrix};

fn palm_nmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_palm-nmf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn factorize_writes_outputs_and_descends() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("v.csv");
    fs::write(&input, "2,0,0,0.5\n0,1,0,0\n0,0,3,0\n0.5,0,0,1\n").unwrap();
    let out = dir.path().join("run");
    let o = palm_nmf(&[
        "factorize",
        "--input",
        path_str(&input),
        "--k",
        "4",
        "--beta-w",
        "0",
        "--beta-h",
        "0",
        "--max-iter",
        "500",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(summary["final_objective"].is_f64());
    assert!(summary["converged"].is_boolean());

    let w = load_matrix(out.join("W.csv")).unwrap();
    let h = load_matrix(out.join("H.csv")).unwrap();
    assert_eq!((w.shape(), h.shape()), ((4, 4), (4, 4)));

    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    let values: Vec<f64> = trace
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.len() >= 2);
    for pair in values.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-9 * (1.0 + pair[0].abs()));
    }

    let manifest: palm_nmf::RunManifest =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.input, input);
    assert_eq!(manifest.config.k, 4);
    assert_eq!(manifest.outputs, ["W.csv", "H.csv", "trace.csv", "manifest.json"]);
}

#[test]
fn factorize_without_input_is_usage_error() {
    let o = palm_nmf(&["factorize", "--k", "2", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--input"));
    assert!(o.stdout.is_empty());
}

#[test]
fn factorize_rejects_bad_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("v.csv");
    fs::write(&input, "1,2\n3,4\n").unwrap();
    let base = ["factorize", "--input", path_str(&input), "--k", "1", "--out", path_str(dir.path())];
    let with = |extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        palm_nmf(&args)
    };
    assert_eq!(with(&["--lambda", "-1"]).status.code(), Some(2));
    assert_eq!(with(&["--gamma1", "1.0"]).status.code(), Some(2));
    assert_eq!(with(&["--k", "0"]).status.code(), Some(2));

    let neg = dir.path().join("neg.csv");
    fs::write(&neg, "1,-2\n3,4\n").unwrap();
    let o = palm_nmf(&["factorize", "--input", path_str(&neg), "--k", "1", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(2));

    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "1,2\n3\n").unwrap();
    let o = palm_nmf(&["factorize", "--input", path_str(&ragged), "--k", "1", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn synth_defaults_and_noise_free_product() {
    let dir = tempfile::tempdir().unwrap();
    let o = palm_nmf(&["synth", "--sigma", "0", "--w-density", "0.2", "--out", path_str(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = load_matrix(dir.path().join("V.csv")).unwrap();
    let w = load_matrix(dir.path().join("W_true.csv")).unwrap();
    let h = load_matrix(dir.path().join("H_true.csv")).unwrap();
    assert_eq!((v.shape(), w.shape(), h.shape()), ((100, 200), (100, 5), (5, 200)));
    assert_eq!(w.as_slice().iter().filter(|&&x| x == 0.0).count(), 400);
    let product = matmul(&w, &h).unwrap();
    for (a, b) in v.as_slice().iter().zip(product.as_slice()) {
        assert!((a - b).abs() <= 1e-12);
    }
    let spec: SyntheticSpec = serde_json::from_str(&fs::read_to_string(dir.path().join("spec.json")).unwrap()).unwrap();
    assert_eq!((spec.d, spec.k, spec.n, spec.sigma), (100, 5, 200, Some(0.0)));
}

#[test]
fn synth_rejects_invalid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let o = palm_nmf(&["synth", "--w-density", "0", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = palm_nmf(&["synth", "--sigma", "-1", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = palm_nmf(&["synth", "--clip", "sideways", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn score_self_and_permuted_copy() {
    let dir = tempfile::tempdir().unwrap();
    let w = Matrix::from_rows(&[[1.0, 0.0, 0.5], [0.25, 2.0, 0.0], [0.0, 1.0, 3.0]]).unwrap();
    let h = Matrix::from_rows(&[[1.0, 2.0], [0.5, 0.0], [0.0, 4.0]]).unwrap();
    // Rotate components (0→1→2→0) and rescale by powers of two.
    let wp = Matrix::from_fn(3, 3, |i, j| w.get(i, (j + 2) % 3) * [2.0, 0.5, 8.0][j]).unwrap();
    let hp = Matrix::from_fn(3, 2, |i, j| h.get((i + 2) % 3, j) / [2.0, 0.5, 8.0][i]).unwrap();
    for (name, m) in [("w", &w), ("h", &h), ("wp", &wp), ("hp", &hp)] {
        save_matrix(m, dir.path().join(format!("{name}.csv"))).unwrap();
    }
    let p = |n: &str| dir.path().join(format!("{n}.csv")).to_str().unwrap().to_string();

    let o = palm_nmf(&["score", "--w", &p("w"), "--h", &p("h"), "--w-true", &p("w"), "--h-true", &p("h")]);
    assert!(o.status.success());
    let s: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(s["dist_w"], 0.0);
    assert_eq!(s["dist_h"], 0.0);
    assert_eq!(s["permutation"], serde_json::json!([0, 1, 2]));

    let o = palm_nmf(&["score", "--w", &p("wp"), "--h", &p("hp"), "--w-true", &p("w"), "--h-true", &p("h")]);
    let s: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(s["dist_w"], 0.0);
    assert_eq!(s["dist_h"], 0.0);
    // Learned column j holds true column (j + 2) % 3.
    assert_eq!(s["permutation"], serde_json::json!([1, 2, 0]));
}

#[test]
fn score_shape_mismatch_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    save_matrix(&Matrix::zeros(3, 2).unwrap(), dir.path().join("w.csv")).unwrap();
    save_matrix(&Matrix::zeros(2, 4).unwrap(), dir.path().join("h.csv")).unwrap();
    save_matrix(&Matrix::zeros(3, 3).unwrap(), dir.path().join("wt.csv")).unwrap();
    save_matrix(&Matrix::zeros(3, 4).unwrap(), dir.path().join("ht.csv")).unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let o = palm_nmf(&["score", "--w", &p("w.csv"), "--h", &p("h.csv"), "--w-true", &p("wt.csv"), "--h-true", &p("ht.csv")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_single_run_and_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let synth_dir = dir.path().join("synth");
    let o = palm_nmf(&["synth", "--d", "12", "--k", "2", "--n", "16", "--out", path_str(&synth_dir)]);
    assert!(o.status.success());
    let out = dir.path().join("bench");
    let o = palm_nmf(&[
        "bench",
        "--spec",
        path_str(&synth_dir.join("spec.json")),
        "--repeats",
        "1",
        "--variants",
        r#"[{"lambda":0.1,"eta":0.5,"beta_w":0.1,"beta_h":0.1}]"#,
        "--max-iter",
        "200",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("comparison.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("0,0,ok,"));
    let table: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("comparison.json")).unwrap()).unwrap();
    assert_eq!(table["summaries"][0]["total"]["std"], 0.0);
    assert_eq!(table["spec"]["k"], 2);
}

#[test]
fn bench_rejects_malformed_variants() {
    let dir = tempfile::tempdir().unwrap();
    let o = palm_nmf(&["bench", "--variants", "[{\"lambda\":1}]", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_all_failed_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // max_iter 1 with an absurd step inflation overflows immediately.
    let o = palm_nmf(&[
        "bench",
        "--d",
        "4",
        "--k",
        "2",
        "--n",
        "5",
        "--repeats",
        "2",
        "--variants",
        r#"[{"lambda":0,"eta":1e308,"beta_w":0,"beta_h":0}]"#,
        "--max-iter",
        "3",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("comparison.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.contains(",failed,")).count(), 2);
}
