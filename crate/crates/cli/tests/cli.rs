use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mfdma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfdma"))
        .args(args)
        .output()
        .expect("failed to run mfdma")
}

fn ok(args: &[&str]) -> String {
    let out = mfdma(args);
    assert!(
        out.status.success(),
        "mfdma {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compare_ranks_backward_forward_mfdfa_centered() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("b.txt");
    let out = dir.path().join("cmp");
    ok(&["generate", "binomial", "--p1", "0.3", "--levels", "14", "--output", path(&input)]);
    let stdout = ok(&[
        "compare", "--input", path(&input), "--q-step", "0.5", "--reference-p1", "0.3",
        "--out-dir", path(&out),
    ]);
    assert!(
        stdout.contains("ranking by sum |delta tau|: backward < forward < mfdfa < centered"),
        "{stdout}"
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("compare.json")).unwrap()).unwrap();
    let ranking: Vec<&str> = report["ranking"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(ranking, ["backward", "forward", "mfdfa", "centered"]);
    let table = fs::read_to_string(out.join("delta_tau.csv")).unwrap();
    assert_eq!(table.lines().next().unwrap(), "q,backward,centered,forward,mfdfa");
    assert_eq!(table.lines().count(), 1 + 17);
}

#[test]
fn surrogate_preserves_values_and_narrows_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("b.txt");
    let out = dir.path().join("sur");
    ok(&["generate", "binomial", "--p1", "0.3", "--levels", "14", "--output", path(&input)]);
    ok(&["surrogate", "--input", path(&input), "--seed", "7", "--q-step", "0.5", "--out-dir", path(&out)]);

    let parse = |p: &Path| -> Vec<f64> {
        let mut v: Vec<f64> = fs::read_to_string(p).unwrap().lines().map(|l| l.parse().unwrap()).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let raw = parse(&input);
    let shuffled = parse(&out.join("shuffled.txt"));
    assert_eq!(raw, shuffled);
    assert_ne!(fs::read(&input).unwrap(), fs::read(out.join("shuffled.txt")).unwrap());

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("surrogate.json")).unwrap()).unwrap();
    assert_eq!(report["multiset_preserved"], true);
    assert!(report["width_shuffled"].as_f64().unwrap() < report["width_raw"].as_f64().unwrap());
    assert!(out.join("raw/results.json").exists());
    assert!(out.join("shuffled/results.json").exists());
}

#[test]
fn output_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.csv");
    ok(&["generate", "cascade2d", "--weights", "0.1,0.2,0.3,0.4", "--levels", "7", "--output", path(&input)]);
    // same out dir for both runs, since the config echo includes it
    let out = dir.path().join("out");
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let status = Command::new(env!("CARGO_BIN_EXE_mfdma"))
            .env("RAYON_NUM_THREADS", threads)
            .args(["analyze", "--mode", "surface", "--input", path(&input), "--out-dir", path(&out)])
            .output()
            .unwrap();
        assert!(status.status.success());
        outputs.push(fs::read_to_string(out.join("results.json")).unwrap());
        fs::remove_dir_all(&out).unwrap();
    }
    assert!(outputs[0] == outputs[1], "results differ between thread counts");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("n.txt");
    ok(&["generate", "noise", "--length", "4096", "--seed", "1", "--output", path(&input)]);
    let config = dir.path().join("cfg.toml");
    fs::write(&config, "theta = 0.5\nq_step = 0.5\nn_count = 12\nformat = \"json\"\n").unwrap();
    let out = dir.path().join("o");
    ok(&[
        "analyze", "--config", path(&config), "--input", path(&input), "--theta", "1",
        "--out-dir", path(&out),
    ]);
    let bundle: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("results.json")).unwrap()).unwrap();
    let cfg = &bundle["provenance"]["config"];
    assert_eq!(cfg["theta"], 1.0);
    assert_eq!(cfg["q_step"], 0.5);
    assert_eq!(cfg["n_count"], 12);
    assert_eq!(cfg["n_max"], 1000);
    assert_eq!(cfg["legendre_window"], 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("z.txt");
    fs::write(&zeros, "0\n".repeat(128)).unwrap();
    let code = |args: &[&str]| mfdma(args).status.code().unwrap();

    assert_eq!(code(&["analyze", "--input", path(&zeros), "--theta", "2"]), 2);
    assert_eq!(code(&["analyze", "--input", path(&zeros), "--n-max", "100"]), 2);
    assert_eq!(code(&["analyze", "--input", path(&zeros)]), 3);
    assert_eq!(code(&["analyze", "--input", path(&dir.path().join("nope.txt"))]), 4);
    assert_eq!(code(&["generate", "binomial", "--p1", "1.5", "--levels", "4"]), 2);
}

#[test]
fn oracle_prints_analytic_values() {
    let stdout = ok(&["oracle", "--p1", "0.3", "--q-min", "-4", "--q-max", "4", "--q-step", "2"]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "q,tau,alpha,f,h");
    assert_eq!(lines.len(), 6);
    let q2: Vec<f64> = lines[4].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(q2[0], 2.0);
    assert!((q2[1] - 0.7858751946471526).abs() < 1e-12);
    assert!((q2[4] - 0.893).abs() < 1e-3);
}

#[test]
fn generate_writes_round_trippable_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.csv");
    ok(&["generate", "cascade2d", "--weights", "0.1,0.2,0.3,0.4", "--levels", "1", "--output", path(&p)]);
    assert_eq!(fs::read_to_string(&p).unwrap(), "0.1,0.2\n0.3,0.4\n");
    let stdout = ok(&["generate", "binomial", "--p1", "0.25", "--levels", "2"]);
    assert_eq!(stdout, "0.0625\n0.1875\n0.1875\n0.5625\n");
}
