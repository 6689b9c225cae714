//! End-to-end tests of the `fnlab` binary: exit codes, file formats, and
//! determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fnlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fnlab"))
}

fn networks_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../networks")
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("failed to spawn fnlab");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn regions_row_count_tags_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        run_ok(
            fnlab()
                .args(["regions", "--I", "0:2.5:251", "--gamma", "0:1.2:121", "-o"])
                .arg(path),
        );
    }
    let text_a = std::fs::read(&a).unwrap();
    let text_b = std::fs::read(&b).unwrap();
    assert_eq!(text_a, text_b, "rerun must be byte-identical");

    let text = String::from_utf8(text_a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "I,gamma,region");
    assert_eq!(lines.len(), 1 + 251 * 121);
    let mut seen = [false; 8];
    for l in &lines[1..] {
        let tag: usize = l.rsplit(',').next().unwrap().parse().unwrap();
        seen[tag] = true;
    }
    for tag in 1..=7 {
        assert!(seen[tag], "tag {tag} missing");
    }
}

#[test]
fn regions_rejects_bad_range() {
    let out = fnlab()
        .args(["regions", "--I", "2.5:0:251"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curves_contains_expected_families_and_markers() {
    let out = run_ok(fnlab().args(["curves", "--set", "all"]));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["I0A", "I1A", "I0B", "I1B", "lock", "Istar", "HH", "GH"] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{name},"))),
            "curve {name} missing"
        );
    }
    // the vertical I0A line carries a constant input column
    let i0a: Vec<&str> = text.lines().filter(|l| l.starts_with("I0A,")).collect();
    assert_eq!(i0a.len(), 400);
    for l in i0a {
        let i: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
        assert!((i - 0.33128133745474586).abs() < 1e-9);
    }
    // two Hopf-Hopf markers
    assert_eq!(text.lines().filter(|l| l.starts_with("HH,")).count(), 2);
}

#[test]
fn desing_inventory_is_seven_with_ordinary_saddle() {
    let out = run_ok(fnlab().args(["desing", "--I", "0.75", "--gamma", "0.3"]));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 7);
    let ordinary: Vec<_> = arr.iter().filter(|s| s["kind"] == "Ordinary").collect();
    assert_eq!(ordinary.len(), 1);
    assert_eq!(ordinary[0]["class"], "Saddle");
}

#[test]
fn desing_field_csv_has_header_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("field.csv");
    run_ok(
        fnlab()
            .args([
                "desing",
                "--I",
                "0.2",
                "--gamma",
                "0.2",
                "--n",
                "50",
                "--window-ya",
                "-2:2",
                "--window-yb",
                "-2:2",
                "--field",
            ])
            .arg(&field)
            .args(["-o", "/dev/null"]),
    );
    let text = std::fs::read_to_string(&field).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "yA,yB,rho1,rho2");
    assert_eq!(lines.len(), 1 + 50 * 50);
}

#[test]
fn simulate_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let report = dir.path().join("report.json");
    run_ok(
        fnlab()
            .args(["simulate", "--net"])
            .arg(networks_dir().join("two.json"))
            .args([
                "--I", "0.2", "--gamma", "0.2", "--t-end", "800", "--dt", "0.01", "-o",
            ])
            .arg(&traj),
    );
    let header = std::fs::read_to_string(&traj).unwrap();
    assert!(header.starts_with("t,y_A,z_A,y_B,z_B"));

    run_ok(
        fnlab()
            .args(["analyze", "--traj"])
            .arg(&traj)
            .args(["--I", "0.2", "--gamma", "0.2", "-o"])
            .arg(&report),
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    for r in arr {
        assert_eq!(r["label"], "Quiescent");
        assert_eq!(r["spikes"].as_array().unwrap().len(), 0);
    }
    // canard section present for the driven channel, not flagged at rest
    let b = &arr[1];
    assert_eq!(b["channel"], "B");
    assert_eq!(b["canard"]["flagged"], false);
}

#[test]
fn simulate_blowup_exits_3() {
    let out = fnlab()
        .args(["simulate", "--net"])
        .arg(networks_dir().join("two.json"))
        .args(["--t-end", "1000", "--dt", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeded"));
}

#[test]
fn simulate_missing_network_exits_2() {
    let out = fnlab()
        .args(["simulate", "--net", "/nonexistent/net.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tree_hopf_reports_every_node() {
    let out = run_ok(
        fnlab()
            .args(["tree-hopf", "--net"])
            .arg(networks_dir().join("tree.json")),
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 7);
    // root carries the single-neuron Hopf pair
    let root = &arr[0];
    assert_eq!(root["node"], "A");
    assert!(root["gamma"].is_null());
    assert!((root["i_h_minus"].as_f64().unwrap() - 0.331281337455).abs() < 1e-9);
    // every driven node has an ordered pair
    for entry in &arr[1..] {
        let lo = entry["i_h_minus"].as_f64().unwrap();
        let hi = entry["i_h_plus"].as_f64().unwrap();
        assert!(lo < hi);
        assert_eq!(entry["gamma"].as_f64().unwrap(), 0.07);
    }
}

#[test]
fn thinned_trajectory_still_parses() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("thin.csv");
    run_ok(
        fnlab()
            .args(["simulate", "--net"])
            .arg(networks_dir().join("chain.json"))
            .args(["--t-end", "100", "--dt", "0.01", "--thin", "10", "-o"])
            .arg(&traj),
    );
    let text = std::fs::read_to_string(&traj).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 1001);
    assert!(lines[0].starts_with("t,y_A,z_A,y_B,z_B,y_C,z_C,y_D,z_D"));
}

#[test]
fn mmo_round_trip_preserves_classification() {
    // the flagship experiment: drive at (1.0, 0.08), thin to 0.01 sampling,
    // and recover the MMO label from the written file
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("mmo.csv");
    let report = dir.path().join("mmo.json");
    run_ok(
        fnlab()
            .args(["simulate", "--net"])
            .arg(networks_dir().join("two.json"))
            .args([
                "--I", "1.0", "--gamma", "0.08", "--t-end", "2000", "--dt", "0.001", "--thin",
                "10", "-o",
            ])
            .arg(&traj),
    );
    run_ok(
        fnlab()
            .args(["analyze", "--traj"])
            .arg(&traj)
            .args(["--I", "1.0", "--gamma", "0.08", "-o"])
            .arg(&report),
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let b = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["channel"] == "B")
        .unwrap();
    assert_eq!(b["label"], "MMO");
    assert_eq!(b["canard"]["flagged"], true);
    assert!(!b["mmo_signature"].as_array().unwrap().is_empty());
}
