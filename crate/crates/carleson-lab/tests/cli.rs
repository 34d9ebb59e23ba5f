//! End-to-end checks of the scenario binary: flag surface and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_carleson-lab"))
}

#[test]
fn list_prints_all_kinds() {
    let out = bin().arg("--list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for kind in carleson_lab::scenario::KINDS {
        assert!(text.contains(kind), "missing {kind}");
    }
}

#[test]
fn passing_scenario_exits_zero() {
    let dir = std::env::temp_dir().join("carleson-cli-pass");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"name": "cli", "kind": "fourier_convergence", "seed": 1,
            "params": {"M": 512, "Nmax": 8}}"#,
    )
    .unwrap();
    let out = bin()
        .args(["fourier-convergence", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.join("out/cli_manifest.json").exists());
}

#[test]
fn kind_mismatch_and_bad_config_exit_two() {
    let dir = std::env::temp_dir().join("carleson-cli-fail");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"name": "cli", "kind": "weak11", "seed": 1, "params": {}}"#,
    )
    .unwrap();
    // subcommand disagrees with the declared kind
    let out = bin()
        .args(["cz", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unreadable config
    let out = bin()
        .args(["cz", "--config", "/nonexistent/cfg.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
