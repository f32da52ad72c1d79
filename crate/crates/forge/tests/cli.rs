//! End-to-end tests of the binary: exit codes, formats, and the catalog.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

struct Forge {
    _dir: tempfile::TempDir,
    home: PathBuf,
}

impl Forge {
    fn new() -> Forge {
        let dir = tempfile::tempdir().unwrap();
        let home = dir.path().to_path_buf();
        Forge { _dir: dir, home }
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_uniformity-forge"))
            .args(args)
            .current_dir(&self.home)
            .env("UF_CATALOG_DIR", self.home.join(".cat"))
            .output()
            .expect("binary runs")
    }

    fn path(&self, name: &str) -> String {
        self.home.join(name).display().to_string()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_exit_codes() {
    let f = Forge::new();
    let ok = f.run(&["verify", data("moa_8_4_2222.moa").to_str().unwrap(), "--strength", "2"]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));

    // the 12-row array is strength 2 but its superposition is not 2-uniform
    let fail = f.run(&["verify", data("moa_12_3_2222.moa").to_str().unwrap(), "--uniform", "2"]);
    assert_eq!(code(&fail), 1);
    assert!(stderr(&fail).contains("[0, 1]"), "{}", stderr(&fail));

    std::fs::write(f.home.join("trunc.moa"), "8 5 2\n4 2 2 2 2\n0 0 0 0 0\n").unwrap();
    let bad = f.run(&["verify", &f.path("trunc.moa"), "--strength", "2"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn verify_scheme_and_json() {
    let f = Forge::new();
    let out = f.run(&["verify", data("h4.ds").to_str().unwrap(), "--scheme", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert_eq!(v["strength"], 3);
}

#[test]
fn construct_kron_matches_the_shipped_example() {
    let f = Forge::new();
    let out = f.run(&[
        "construct", "kron", "--a1", "trivial:2", "--ghm", "hadamard:4", "--out", "k.moa",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("md 3 (formula value 3)"));
    let reread = f.run(&["verify", &f.path("k.moa"), "--strength", "2"]);
    assert_eq!(code(&reread), 0);
}

#[test]
fn construct_state_rejects_the_redundant_array() {
    let f = Forge::new();
    let out = f.run(&[
        "construct", "state", "--input",
        data("moa_12_3_2222.moa").to_str().unwrap(), "-k", "2",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not irredundant"), "{}", stderr(&out));
}

#[test]
fn split_then_delete_chain() {
    let f = Forge::new();
    let split = f.run(&[
        "construct", "split", "--input",
        data("moa_18_6_333333.moa").to_str().unwrap(),
        "--col", "0", "--d1", "3", "--d2", "2", "--out", "split.moa",
    ]);
    assert_eq!(code(&split), 0, "{}", stderr(&split));
    let del = f.run(&[
        "construct", "delete", "--input", &f.path("split.moa"),
        "--cols", "7", "--out", "del.moa",
    ]);
    assert_eq!(code(&del), 0, "{}", stderr(&del));
    let state = f.run(&["construct", "state", "--input", &f.path("del.moa"), "-k", "2"]);
    assert_eq!(code(&state), 0, "{}", stderr(&state));
}

#[test]
fn shadow_reports_and_parity_error() {
    let f = Forge::new();
    let out = f.run(&["shadow", "3", "2", "2", "2", "2", "2", "2", "2", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("S_1 = -23/12"), "{text}");
    assert!(text.contains("EXCLUDED"), "{text}");

    let ghz = f.run(&["shadow", "2", "2", "2"]);
    assert_eq!(code(&ghz), 0);
    assert!(stdout(&ghz).contains("NOT-EXCLUDED"));

    let parity = f.run(&["shadow", "3", "2", "2", "2"]);
    assert_eq!(code(&parity), 2);
    assert!(stderr(&parity).contains("odd"), "{}", stderr(&parity));
}

#[test]
fn shadow_scan_contains_table_rows() {
    let f = Forge::new();
    let out = f.run(&["shadow", "--scan", "9", "4", "--json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let rows = v["excluded"].as_array().unwrap();
    let has = |dims: &[u64]| {
        rows.iter().any(|r| {
            r["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect::<Vec<_>>()
                == dims
        })
    };
    assert!(has(&[3, 2, 2, 2, 2, 2, 2, 2, 2]));
    assert!(has(&[4, 3, 3, 3, 3, 3, 3, 2, 2]));
}

#[test]
fn catalog_lists_shipped_examples_and_tracks_provenance() {
    let f = Forge::new();
    let fresh = f.run(&["catalog", "list"]);
    assert_eq!(code(&fresh), 0, "{}", stderr(&fresh));
    let text = stdout(&fresh);
    for name in [
        "moa_8_4_2222.moa",
        "moa_12_3_2222.moa",
        "moa_18_3333333_2.moa",
        "h4.ds",
        "eq2.qst",
    ] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }

    let kron = f.run(&[
        "construct", "kron", "--a1", "trivial:2", "--ghm", "hadamard:2", "--out", "k2.moa",
    ]);
    assert_eq!(code(&kron), 0, "{}", stderr(&kron));
    let listed = f.run(&["catalog", "list"]);
    assert!(stdout(&listed).contains("kron of"), "{}", stdout(&listed));

    // show accepts a unique id prefix; missing ids exit 2
    let id_line = stdout(&kron);
    let id = id_line.split_whitespace().next().unwrap();
    let shown = f.run(&["catalog", "show", &id[..12]]);
    assert_eq!(code(&shown), 0);
    assert!(stdout(&shown).contains("kron"));
    let missing = f.run(&["catalog", "show", "feedfacecafe"]);
    assert_eq!(code(&missing), 2);

    // gc drops the entry once its file is gone
    std::fs::remove_file(f.home.join("k2.moa")).unwrap();
    let gc = f.run(&["catalog", "gc"]);
    assert_eq!(code(&gc), 0);
    assert!(stdout(&gc).contains("removed 1"));
}

#[test]
fn shipped_examples_reverify() {
    let f = Forge::new();
    for (name, args) in [
        ("moa_8_4_2222.moa", vec!["--strength", "2"]),
        ("moa_12_3_2222.moa", vec!["--strength", "2"]),
        ("moa_18_3333333_2.moa", vec!["--strength", "2"]),
        ("moa_18_6_333333.moa", vec!["--strength", "2"]),
        ("oa_16_44444.moa", vec!["--strength", "2"]),
        ("h4.ds", vec!["--scheme"]),
        ("eq2.qst", vec!["--uniform", "2"]),
    ] {
        let mut full = vec!["verify".to_string(), data(name).display().to_string()];
        full.extend(args.iter().map(|s| s.to_string()));
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let out = f.run(&refs);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
    }
}

#[test]
fn strength3_construction_via_cli() {
    let f = Forge::new();
    let out = f.run(&[
        "construct", "strength3", "--a2", "evenweight:4", "--h", "hadamard:4",
        "--out", "s3.moa",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("binary-block md 8 (formula value 8)"));
    let reread = f.run(&["verify", &f.path("s3.moa"), "--strength", "3"]);
    assert_eq!(code(&reread), 0);
}

#[test]
fn reduce_and_merge_keep_uniformity() {
    let f = Forge::new();
    let reduce = f.run(&[
        "construct", "reduce", "--input", data("eq2.qst").to_str().unwrap(),
        "--party", "0", "--outcome", "0", "--check-uniform", "1", "--out", "r.qst",
    ]);
    assert_eq!(code(&reduce), 0, "{}", stderr(&reduce));
    assert!(stdout(&reduce).contains("probability 0.25"));

    let merge = f.run(&[
        "construct", "merge", "--input", data("eq2.qst").to_str().unwrap(),
        "-i", "1", "-j", "2", "--check-uniform", "1", "--out", "m.qst",
    ]);
    assert_eq!(code(&merge), 0, "{}", stderr(&merge));
}

#[test]
fn catalog_lock_blocks_second_writer() {
    let f = Forge::new();
    let dir = f.home.join(".cat");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("catalog.lock"), b"held").unwrap();
    let out = f.run(&["catalog", "list"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("locked"), "{}", stderr(&out));
}
