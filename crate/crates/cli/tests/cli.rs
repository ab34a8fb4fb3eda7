//! End-to-end checks of the command-line binary: artifact layout,
//! deterministic reruns, the no-elements special case, and exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_irs-regions"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("cfg.json");
    fs::write(&path, body).unwrap();
    path
}

const SMALL_CONFIG: &str = r#"{
  "schema_version": 1,
  "geometry": { "d1_m": 500.0, "d2_m": 400.0 },
  "sizes": { "m": 4, "m1": 2, "m2": 2 },
  "solver": { "rate_ratio_grid": 21, "power_split_grid": 21,
              "random_inits": 30, "refine_top": 4, "fdma_samples": 65 },
  "seeds": [0, 1]
}"#;

fn dir_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    entries.sort();
    entries
}

#[test]
fn mac_regions_writes_expected_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_CONFIG);
    let out = tmp.path().join("out");
    let status = bin()
        .args(["mac-regions", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .args(["--threads", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    for seed in [0, 1] {
        let text = fs::read_to_string(out.join(format!("mac_regions_seed{seed}.json"))).unwrap();
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["regions"].as_array().unwrap().len(), 9);
        let svg = fs::read_to_string(out.join(format!("mac_regions_seed{seed}.svg"))).unwrap();
        assert!(svg.starts_with("<svg"));
    }
    let csv = fs::read_to_string(out.join("mac_regions_summary.csv")).unwrap();
    assert!(csv.starts_with("seed,region,max_common_rate,max_sum_rate\n"));
    assert_eq!(csv.lines().count(), 1 + 2 * 9);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_CONFIG);
    let (out1, out2) = (tmp.path().join("a"), tmp.path().join("b"));
    for (out, threads) in [(&out1, "1"), (&out2, "4")] {
        let status = bin()
            .args(["mac-regions", "--config"])
            .arg(&cfg)
            .arg("--out-dir")
            .arg(out)
            .args(["--threads", threads])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(dir_snapshot(&out1), dir_snapshot(&out2));
}

#[test]
fn zero_elements_emits_only_the_direct_pentagon() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{
          "schema_version": 1,
          "geometry": { "d1_m": 500.0, "d2_m": 400.0 },
          "sizes": { "m": 0, "m1": 0, "m2": 0 },
          "seeds": [0]
        }"#,
    );
    let out = tmp.path().join("out");
    let status = bin()
        .args(["mac-regions", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("mac_regions_seed0.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let regions = json["regions"].as_array().unwrap();
    assert_eq!(regions.len(), 1);
    assert_eq!(regions[0]["name"], "no-irs");
}

#[test]
fn seeds_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_CONFIG);
    let out = tmp.path().join("out");
    let status = bin()
        .args(["mac-regions", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .args(["--seeds", "5-6"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("mac_regions_seed5.json").exists());
    assert!(out.join("mac_regions_seed6.json").exists());
    assert!(!out.join("mac_regions_seed0.json").exists());
}

#[test]
fn bad_config_exits_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{ "schema_version": 99 }"#);
    let status = bin()
        .args(["mac-regions", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = bin().args(["mac-regions"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn mismatched_experiment_kind_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &SMALL_CONFIG.replacen(
            "\"schema_version\": 1,",
            "\"schema_version\": 1,\n  \"experiment\": \"bc-regions\",",
            1,
        ),
    );
    let status = bin()
        .args(["mac-regions", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn bc_regions_and_sweeps_run_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{
          "schema_version": 1,
          "geometry": { "d1_m": 200.0, "d2_m": 200.0 },
          "sizes": { "m": 4, "m1": 2, "m2": 2 },
          "solver": { "rate_ratio_grid": 21, "power_split_grid": 21,
                      "random_inits": 30, "refine_top": 4, "fdma_samples": 65 },
          "seeds": [0, 1],
          "sweep": { "d2_list_m": [200.0, 400.0] }
        }"#,
    );
    let out = tmp.path().join("out");
    for verb in ["bc-regions", "common-rate", "element-sweep"] {
        let status = bin()
            .args([verb, "--config"])
            .arg(&cfg)
            .arg("--out-dir")
            .arg(&out)
            .args(["--threads", "2"])
            .status()
            .unwrap();
        assert!(status.success(), "{verb} failed");
    }
    assert!(out.join("bc_regions_seed0.json").exists());
    let sweep = fs::read_to_string(out.join("common_rate_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 3);
    let alloc = fs::read_to_string(out.join("element_allocation.csv")).unwrap();
    // Two distances times m2 in {1, 2, 3}.
    assert_eq!(alloc.lines().count(), 1 + 2 * 3);
}
