//! End-to-end CLI contract: exit codes, validation-first behavior and
//! subcommand plumbing through the built binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fusion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusion")).args(args).output().unwrap()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fusion-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn minimal_config(out_dir: &Path) -> String {
    format!(
        r#"seed = 5
out_dir = "{}"

[[experiment]]
train_size = 100
test_size = 100
k_splits = [3]
realizations = 1
rules = ["simple-majority"]

[experiment.dataset]
generator = "twonorm"
n = 200

[experiment.classifier]
kind = "wknn"
k = 3
"#,
        out_dir.display()
    )
}

#[test]
fn minimal_plan_emits_one_cell() {
    let dir = temp_dir("minimal");
    let out_dir = dir.join("out");
    let config = dir.join("minimal.toml");
    std::fs::write(&config, minimal_config(&out_dir)).unwrap();
    let out = fusion(&["run", "--config", config.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cells = std::fs::read_to_string(out_dir.join("cells.jsonl")).unwrap();
    assert_eq!(cells.lines().count(), 1);
    let cell: serde_json::Value = serde_json::from_str(cells.lines().next().unwrap()).unwrap();
    assert_eq!(cell["rule"], "simple-majority");
    assert_eq!(cell["k"], 3);
}

#[test]
fn unknown_config_key_exits_2_without_output() {
    let dir = temp_dir("badkey");
    let out_dir = dir.join("out");
    let config = dir.join("bad.toml");
    let text = minimal_config(&out_dir).replace("realizations = 1", "realisations = 1");
    std::fs::write(&config, text).unwrap();
    let out = fusion(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists(), "no output files on config error");
}

#[test]
fn invalid_plan_exits_2_without_output() {
    let dir = temp_dir("badplan");
    let out_dir = dir.join("out");
    let config = dir.join("bad.toml");
    // train + test exceed the generated dataset
    let text = minimal_config(&out_dir).replace("test_size = 100", "test_size = 500");
    std::fs::write(&config, text).unwrap();
    let out = fusion(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn missing_subcommand_exits_2() {
    let out = fusion(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_per_seed_and_round_trips() {
    let dir = temp_dir("gen");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for path in [&a, &b] {
        let out = fusion(&[
            "gen", "--generator", "waveform", "--n", "80", "--seed", "9", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let check = fusion(&[
        "ingest-check",
        "--input",
        a.to_str().unwrap(),
        "--label-column",
        "label",
        "--positive-label",
        "omega2",
    ]);
    assert!(check.status.success());
    let text = String::from_utf8(check.stdout).unwrap();
    assert!(text.contains("samples: 80"), "{text}");
    assert!(text.contains("dimension: 21"), "{text}");
}

#[test]
fn ingest_check_reports_bad_rows_with_exit_1() {
    let dir = temp_dir("badcsv");
    let csv = dir.join("bad.csv");
    std::fs::write(&csv, "x,cls\n1.0,a\nnope,b\n").unwrap();
    let out = fusion(&[
        "ingest-check",
        "--input",
        csv.to_str().unwrap(),
        "--label-column",
        "cls",
        "--positive-label",
        "b",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 3"));
}

#[test]
fn rank_partitions_generated_features() {
    let out = fusion(&["rank", "--generator", "twonorm", "--n", "400", "--seed", "3", "--k", "5"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["ranking"].as_array().unwrap().len(), 20);
    let groups = doc["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 5);
    let total: usize = groups.iter().map(|g| g.as_array().unwrap().len()).sum();
    assert_eq!(total, 20);
}

#[test]
fn summary_numbers_appear_in_machine_readable_output() {
    let dir = temp_dir("agree");
    let out_dir = dir.join("out");
    let config = dir.join("cfg.toml");
    std::fs::write(&config, minimal_config(&out_dir)).unwrap();
    let out = fusion(&["run", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let summary = std::fs::read_to_string(out_dir.join("summary.txt")).unwrap();
    assert_eq!(summary, String::from_utf8(out.stdout).unwrap());

    let cell: serde_json::Value = serde_json::from_str(
        std::fs::read_to_string(out_dir.join("cells.jsonl")).unwrap().lines().next().unwrap(),
    )
    .unwrap();
    for field in ["mean_improvement", "member_mean_accuracy", "member_max_accuracy"] {
        let printed = format!("{:.2}", cell[field].as_f64().unwrap());
        assert!(summary.contains(&printed), "summary lacks {field} = {printed}\n{summary}");
    }
}

#[test]
fn lae_curve_constant_estimator_is_flat() {
    // single-member archive fabricated through a real run, then queried
    let dir = temp_dir("curve");
    let out_dir = dir.join("out");
    let config = dir.join("cfg.toml");
    std::fs::write(&config, minimal_config(&out_dir)).unwrap();
    assert!(fusion(&["run", "--config", config.to_str().unwrap(), "--quiet"]).status.success());

    let archive = out_dir.join("archive.json");
    let out = fusion(&[
        "lae-curve", "--archive", archive.to_str().unwrap(), "--member", "0", "--points", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    // header + exactly the two endpoints
    assert_eq!(text.lines().count(), 3);

    let bad = fusion(&[
        "lae-curve", "--archive", archive.to_str().unwrap(), "--member", "99", "--points", "2",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}
