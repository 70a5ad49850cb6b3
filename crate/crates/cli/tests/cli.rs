use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rauzy_core::digitseq::{uniform_random, write_digits};
use rauzy_core::DigitSeq;

fn rauzy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rauzy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(rauzy(&["--help"]).status.code(), Some(0));
    assert_eq!(rauzy(&[]).status.code(), Some(64));
    assert_eq!(rauzy(&["analyze", "--no-such-flag"]).status.code(), Some(64));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    assert_eq!(
        rauzy(&["bounds", "--base", "1", "-o", path(&out)]).status.code(),
        Some(64)
    );
    let r = rauzy(&[
        "generate",
        "bernoulli",
        "--probs",
        "1/2,1/2",
        "-n",
        "10",
        "-o",
        path(&out),
    ]);
    assert_eq!(r.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&r.stderr).contains("--seed"));
}

#[test]
fn rational_one_third() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("third.txt");
    let r = rauzy(&[
        "generate",
        "rational",
        "--value",
        "1/3",
        "--base",
        "10",
        "-n",
        "10",
        "-o",
        path(&out),
    ]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "base=10\n3333333333\n");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("third.txt.json")).unwrap()).unwrap();
    assert_eq!(manifest["schema_version"], 1);
    assert_eq!(manifest["params"]["value"], "1/3");
    assert_eq!(manifest["outputs"][0]["bytes"], 19);
}

#[test]
fn analyze_all_zero_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zeros.txt");
    write_digits(&DigitSeq::new(3, vec![0; 50_000]).unwrap(), &input).unwrap();
    let r = rauzy(&["analyze", path(&input), "--ell-max", "4"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(stdout(&r), "PreservingLike");
    for ext in ["csv", "json", "manifest.json"] {
        assert!(dir.path().join(format!("zeros.txt.profile.{ext}")).exists());
    }
    let csv = fs::read_to_string(dir.path().join("zeros.txt.profile.csv")).unwrap();
    assert!(csv.starts_with("ell,N,mismatches,scored,beta\n1,1024,0,1024,0.0000000000\n"));
}

#[test]
fn analyze_bernoulli_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("b.txt");
    let g = rauzy(&[
        "generate",
        "bernoulli",
        "--probs",
        "0.75,0.25",
        "-n",
        "1000000",
        "--seed",
        "8",
        "-o",
        path(&input),
    ]);
    assert_eq!(g.status.code(), Some(0));
    let r = rauzy(&["analyze", path(&input), "--ell-max", "4", "--base", "2"]);
    let line = stdout(&r);
    let inner = line
        .strip_prefix("Intermediate [")
        .and_then(|s| s.strip_suffix(']'))
        .expect(&line);
    let (low, high) = inner.split_once(", ").unwrap();
    for v in [low, high] {
        assert!((v.parse::<f64>().unwrap() - 0.25).abs() < 0.01, "{line}");
    }
    assert_eq!(rauzy(&["analyze", path(&input), "--base", "3"]).status.code(), Some(2));
}

#[test]
fn analyze_uniform_is_normal_like() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u.txt");
    write_digits(&uniform_random(2, 10_000_000, 77).unwrap(), &input).unwrap();
    let r = rauzy(&["analyze", path(&input), "--tail-fraction", "0.25", "--threads", "2"]);
    assert_eq!(stdout(&r), "NormalLike");
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("u.txt.profile.json")).unwrap()).unwrap();
    assert_eq!(doc["classification"], "NormalLike");
    assert_eq!(doc["source"]["length"], 10_000_000);
    assert!(doc.get("threads").is_none());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "base=2\n0101\n01x1\n").unwrap();
    let r = rauzy(&["analyze", path(&input)]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("line 3") && err.contains("offset 3"), "{err}");
    assert_eq!(
        rauzy(&["analyze", path(&dir.path().join("missing.txt"))]).status.code(),
        Some(2)
    );
}

#[test]
fn generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let kinds: [&[&str]; 6] = [
        &["bernoulli", "--noise", "1/4", "-n", "5000", "--seed", "3"],
        &[
            "markov", "--noise", "0.2", "--order", "2", "--budget", "500", "-n", "5000", "--seed", "3",
        ],
        &["champernowne", "--base", "3", "-n", "5000"],
        &[
            "interleave",
            "--set",
            "progressions:3:0,2:residual",
            "-n",
            "5000",
            "--seed",
            "3",
        ],
        &["block-concat", "--noise", "0.2", "--j-max", "5", "--seed", "3"],
        &["rauzy-codec", "--blocks", "3", "--seed", "3"],
    ];
    for (i, kind) in kinds.iter().enumerate() {
        let mut files = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{i}-{run}.txt"));
            let mut args = vec!["generate"];
            args.extend_from_slice(kind);
            args.extend_from_slice(&["-o", path(&out)]);
            let r = rauzy(&args);
            assert_eq!(
                r.status.code(),
                Some(0),
                "{kind:?}: {}",
                String::from_utf8_lossy(&r.stderr)
            );
            files.push(fs::read(&out).unwrap());
        }
        assert_eq!(files[0], files[1], "{kind:?}");
    }
    let block = fs::read_to_string(dir.path().join("4-0.txt")).unwrap();
    assert_eq!(block.lines().skip(1).map(str::len).sum::<usize>(), 1700);
}

#[test]
fn codec_file_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.txt");
    let g = rauzy(&[
        "generate",
        "rauzy-codec",
        "--k",
        "5",
        "--blocks",
        "20",
        "--seed",
        "5",
        "-o",
        path(&out),
    ]);
    assert_eq!(g.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("v.txt.report.json")).unwrap()).unwrap();
    assert!(report["max_errors"].as_u64().unwrap() <= 2);
    let v = rauzy(&["verify-codec", path(&out), "--k", "5"]);
    assert_eq!(v.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_eq!(summary["blocks"], 20);

    // flipping a digit in the gap of one block breaks its run
    let mut text = fs::read_to_string(&out).unwrap().into_bytes();
    let pos = "base=2\n".len() + 1606 * 3 + 1500 + (1606 * 3 + 1500) / 80;
    text[pos] = if text[pos] == b'0' { b'1' } else { b'0' };
    fs::write(&out, text).unwrap();
    assert_eq!(rauzy(&["verify-codec", path(&out), "--k", "5"]).status.code(), Some(1));
    assert_eq!(
        rauzy(&["verify-codec", path(&out), "--k", "5", "--ell", "100"])
            .status
            .code(),
        Some(64)
    );
}

#[test]
fn bounds_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("hd");
    let r = rauzy(&["bounds", "--base", "2", "--grid", "4", "-o", path(&prefix), "--plot"]);
    assert_eq!(r.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("hd.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0], "s,lower,upper,A1,A2,A4,L");
    assert_eq!(rows[1], "0.000000000000,0.000000000000,0.000000000000,1,1,1,1");
    assert_eq!(rows[5], "0.500000000000,1.000000000000,1.000000000000,1,1,1,1");
    assert!(fs::read_to_string(dir.path().join("hd.svg"))
        .unwrap()
        .starts_with("<svg"));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hd.json")).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn oracle_runs() {
    let pass = rauzy(&["oracle", "--base", "2", "--ell", "2", "--trials", "100", "--seed", "1"]);
    assert_eq!(pass.status.code(), Some(0));
    assert!(stdout(&pass).starts_with("pass: 100 trials"));
    assert_eq!(
        rauzy(&["oracle", "--base", "3", "--ell", "1", "--trials", "100", "--seed", "2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        rauzy(&["oracle", "--base", "2", "--ell", "4", "--trials", "3", "--seed", "2"])
            .status
            .code(),
        Some(0)
    );
    let refused = rauzy(&["oracle", "--base", "2", "--ell", "5", "--seed", "1"]);
    assert_eq!(refused.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("4294967296"));
}

#[test]
fn measure_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("uniform.json");
    fs::write(&spec, r#"{"schema_version":1,"base":3,"k":1,"rho":[0.3333333333333333,0.3333333333333333,0.3333333333333334],"P":[[0.3333333333333333,0.3333333333333333,0.3333333333333334],[0.3333333333333333,0.3333333333333333,0.3333333333333334],[0.3333333333333333,0.3333333333333333,0.3333333333333334]]}"#).unwrap();
    let m = rauzy(&["measure", path(&spec), "--log-base", "b"]);
    assert_eq!(m.status.code(), Some(0), "{}", String::from_utf8_lossy(&m.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&m)).unwrap();
    assert!((doc["entropy"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((doc["noise"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);

    let best = dir.path().join("best.json");
    let s = rauzy(&[
        "search",
        "--base",
        "2",
        "--noise",
        "1/4",
        "--order",
        "2",
        "--budget",
        "2000",
        "-o",
        path(&best),
    ]);
    assert_eq!(s.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&s)).unwrap();
    assert_eq!(doc["bernoulli"]["noise"], "1/4");
    assert_eq!(doc["bernoulli"]["probs"], serde_json::json!(["3/4", "1/4"]));
    assert!(doc["markov"]["entropy"].as_f64().unwrap() >= doc["bernoulli"]["entropy"].as_f64().unwrap() - 1e-9);
    let again = rauzy(&["measure", path(&best)]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(
        rauzy(&["measure", path(&spec), "--log-base", "7"]).status.code(),
        Some(64)
    );
}
