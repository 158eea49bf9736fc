//! Smoke tests of the command-line surface.

use std::path::Path;
use std::process::Command;

fn gambitlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gambitlab"))
}

#[test]
fn compare_prints_the_full_statistic_set() {
    let output = gambitlab()
        .args([
            "compare",
            "--test",
            "56,2,242",
            "--baseline",
            "16,3,281",
            "--innovator",
            "black",
            "--reps",
            "500",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("distance  40.012"), "{text}");
    assert!(text.contains("decision  Reject H0"), "{text}");
    assert!(text.contains("category  F"), "{text}");
}

#[test]
fn simulate_emits_labelled_scatter_rows() {
    let output = gambitlab()
        .args([
            "simulate",
            "--counts",
            "16,3,281",
            "--baseline",
            "21,2,277",
            "--reps",
            "50",
            "--seed",
            "1",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("cluster,white_wins,black_wins"));
    assert_eq!(text.lines().count(), 101); // header + 2 x 50 points
    assert!(text.lines().any(|l| l.starts_with("baseline,")));
    assert!(text.lines().any(|l| l.starts_with("test,")));
}

#[test]
fn run_then_report_reemits_identical_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/reference_study.toml");
    let run = gambitlab()
        .args(["run"])
        .arg(&config)
        .args(["--out"])
        .arg(dir.path())
        .args(["--reps", "300"])
        .output()
        .unwrap();
    assert!(run.status.success(), "{run:?}");
    let comparisons = std::fs::read(dir.path().join("comparisons.tsv")).unwrap();
    assert!(dir.path().join("counts.tsv").exists());
    assert!(dir.path().join("C61-vs-C68.scatter.csv").exists());

    let report = gambitlab()
        .args(["report", "--dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(report.status.success(), "{report:?}");
    assert_eq!(
        comparisons,
        std::fs::read(dir.path().join("comparisons.tsv")).unwrap(),
        "report must re-emit identical tables"
    );
    let stdout = String::from_utf8(report.stdout).unwrap();
    assert!(stdout.contains("C68 Ruy Lopez"));
}

#[test]
fn run_rejects_a_broken_study_before_executing() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "format_version = 1\n[study]\nfamily_alpha = 0.005\nrepetitions = 100\nseed = 1\n\n[[comparison]]\ntest = \"a\"\nbaseline = \"b\"\n",
    )
    .unwrap();
    let output = gambitlab()
        .args(["run"])
        .arg(&bad)
        .args(["--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!output.status.success());
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("unknown experiment id"), "{err}");
    assert!(!dir.path().join("counts.tsv").exists(), "no artifacts on failure");
}
