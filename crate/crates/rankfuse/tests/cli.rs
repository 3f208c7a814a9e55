//! End-to-end tests of the `rankfuse` binary.

use std::path::Path;
use std::process::{Command, Output};

fn rankfuse(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rankfuse"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn aggregate_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let rankings = write(dir.path(), "rankings.txt", "1,2,4,3,5\n2,1,3,4,5\n");
    let out = rankfuse(
        &["aggregate", "--rankings", &rankings, "--algorithm", "proposed"],
        &[],
    );
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("consensus = 1,2,3,4,5"), "{text}");
    assert!(text.contains("objective = 4"), "{text}");
    // The effective configuration is logged with the output.
    assert!(text.starts_with("# rankfuse aggregate"), "{text}");
    assert!(text.contains("alpha=0.5"), "{text}");
}

#[test]
fn aggregate_supports_weights_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let rankings = write(dir.path(), "rankings.txt", "1,2\n2,1\n");
    let weights = write(dir.path(), "weights.txt", "0.9\n0.1\n");
    let out_path = dir.path().join("result.txt");
    let out = rankfuse(
        &[
            "aggregate",
            "--rankings",
            &rankings,
            "--weights",
            &weights,
            "--output",
            out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{out:?}");
    let file = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(file, stdout(&out));
    assert!(file.contains("consensus = 1,2"), "{file}");
}

#[test]
fn aggregate_runs_every_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let rankings = write(dir.path(), "rankings.txt", "1,2,3\n1,2,3\n2,1,3\n");
    for algorithm in ["borda", "mean", "geometric", "voting", "mc4", "stuart", "rra"] {
        let out = rankfuse(
            &["aggregate", "--rankings", &rankings, "--algorithm", algorithm],
            &[],
        );
        assert!(out.status.success(), "{algorithm}: {out:?}");
        assert!(
            stdout(&out).contains("consensus = 1,2,3"),
            "{algorithm}: {}",
            stdout(&out)
        );
    }
}

#[test]
fn bench_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "bench".to_string(),
            "--n-rankings".into(),
            "4".into(),
            "--m-objects".into(),
            "6".into(),
            "--iterations".into(),
            "4".into(),
            "--sigma-step".into(),
            "0.1".into(),
            "--seed".into(),
            "7".into(),
            "--algorithms".into(),
            "proposed,borda,mc4".into(),
            "--output-dir".into(),
            out.into(),
        ]
    };
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    let d3 = dir.path().join("c");
    for (out_dir, threads) in [(&d1, "4"), (&d2, "1"), (&d3, "2")] {
        let args: Vec<String> = args(out_dir.to_str().unwrap());
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = rankfuse(&argv, &[("RANKFUSE_THREADS", threads)]);
        assert!(out.status.success(), "{out:?}");
    }
    for name in ["curves.csv", "auc.csv"] {
        let a = std::fs::read(d1.join(name)).unwrap();
        let b = std::fs::read(d2.join(name)).unwrap();
        let c = std::fs::read(d3.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs across thread counts");
        assert_eq!(a, c, "{name} differs across thread counts");
    }
    let curves = std::fs::read_to_string(d1.join("curves.csv")).unwrap();
    assert!(curves.starts_with("# rankfuse bench"), "{curves}");
    assert!(curves.contains("algorithm,sigma,mean_similarity"), "{curves}");
    let auc = std::fs::read_to_string(d1.join("auc.csv")).unwrap();
    assert!(auc.contains("algorithm,auc"), "{auc}");
    assert!(auc.contains("seed=7"), "{auc}");
}

#[test]
fn crowd_uniform_override_reduces_to_majority() {
    let dir = tempfile::tempdir().unwrap();
    let labels = write(
        dir.path(),
        "labels.csv",
        "worker,item,label\n\
         1,1,1\n1,2,0\n1,3,1\n\
         2,1,1\n2,2,1\n2,3,0\n\
         3,1,0\n3,2,0\n3,3,1\n",
    );
    let gold = write(dir.path(), "gold.csv", "item,label\n1,1\n2,0\n3,1\n");
    let out_dir = dir.path().join("crowd");
    let out = rankfuse(
        &[
            "crowd",
            "--labels",
            &labels,
            "--gold",
            &gold,
            "--uniform-weights",
            "--output-dir",
            out_dir.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{out:?}");
    let report = std::fs::read_to_string(out_dir.join("report.txt")).unwrap();
    let get = |key: &str| -> f64 {
        report
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("{key} missing in {report}"))
            .parse()
            .unwrap()
    };
    assert_eq!(get("baseline_accuracy"), get("proposed_accuracy"));
    assert!(out_dir.join("annotators.csv").exists());
    assert!(out_dir.join("predictions.csv").exists());
}

#[test]
fn metrics_reports_the_worked_pair() {
    let dir = tempfile::tempdir().unwrap();
    let rankings = write(dir.path(), "rankings.txt", "1,2,4,3,5\n2,1,3,4,5\n");
    let out = rankfuse(
        &["metrics", "--rankings", &rankings, "--pair", "1", "2"],
        &[],
    );
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("footrule_distance = 4"), "{text}");
    assert!(text.contains("kendall_distance = 2"), "{text}");
    assert!(text.contains("footrule_similarity = 0.666666"), "{text}");
}

#[test]
fn error_exit_codes_are_distinct() {
    let dir = tempfile::tempdir().unwrap();

    // Missing file: 10.
    let out = rankfuse(&["aggregate", "--rankings", "/nonexistent.txt"], &[]);
    assert_eq!(out.status.code(), Some(10), "{out:?}");

    // Parse error with a line number: 11.
    let bad = write(dir.path(), "bad.txt", "1,2\n1,x\n");
    let out = rankfuse(&["aggregate", "--rankings", &bad], &[]);
    assert_eq!(out.status.code(), Some(11), "{out:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":2:"), "{err}");

    // Weights length mismatch: 12.
    let rankings = write(dir.path(), "r.txt", "1,2\n2,1\n");
    let weights = write(dir.path(), "w.txt", "1.0\n");
    let out = rankfuse(
        &["aggregate", "--rankings", &rankings, "--weights", &weights],
        &[],
    );
    assert_eq!(out.status.code(), Some(12), "{out:?}");

    // Config error: 13.
    let out = rankfuse(
        &["aggregate", "--rankings", &rankings, "--algorithm", "zzz"],
        &[],
    );
    assert_eq!(out.status.code(), Some(13), "{out:?}");

    // Universe mismatch from the core: 32.
    let mismatched = write(dir.path(), "m.txt", "1,2\n1,3\n");
    let out = rankfuse(&["aggregate", "--rankings", &mismatched], &[]);
    assert_eq!(out.status.code(), Some(32), "{out:?}");

    // Unknown flags are clap usage errors.
    let out = rankfuse(&["aggregate", "--rankings", &rankings, "--bogus"], &[]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn bad_thread_env_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let rankings = write(dir.path(), "r.txt", "1,2\n");
    let out = rankfuse(
        &["aggregate", "--rankings", &rankings],
        &[("RANKFUSE_THREADS", "zero")],
    );
    assert_eq!(out.status.code(), Some(13), "{out:?}");
}
