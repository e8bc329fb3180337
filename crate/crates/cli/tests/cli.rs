use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ncofdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncofdm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn complexity_prints_the_headline_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = ncofdm(&["complexity", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ratios = fs::read_to_string(dir.path().join("complexity_ratios.csv")).unwrap();
    assert!(ratios.contains("low_interference,nc_ofdm,0.474,"), "{ratios}");
    assert!(dir.path().join("complexity_manifest.txt").exists());
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        &["ber", "--set", "no_such_key=1"][..],
        &["psd", "--set", "k=0"],
        &["psd", "--set", "scheme=fancy"],
        &["continuity", "--set", "scheme=ofdm"],
        &["ber", "--config", "/definitely/not/here.cfg"],
    ] {
        let out = ncofdm(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
    }
}

#[test]
fn runtime_errors_exit_with_one() {
    // the output directory cannot be created below a regular file
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = ncofdm(&["complexity", "--out-dir", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_and_overrides_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nscheme = low_interference\nn = 3\nnum_symbols = 20\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = ncofdm(&[
        "continuity",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "n=1",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(out_dir.join("continuity_low_interference.csv")).unwrap();
    // 20 junctions with orders 0 and 1
    assert_eq!(text.lines().count(), 1 + 20 * 2);
    let manifest = fs::read_to_string(out_dir.join("continuity_low_interference_manifest.txt")).unwrap();
    assert!(manifest.contains("\nN = 1\n"), "{manifest}");
}

#[test]
fn ofdm_psd_writes_only_the_welch_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = ncofdm(&[
        "psd",
        "--set",
        "scheme=ofdm",
        "--set",
        "num_symbols=100",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let names: Vec<_> = csvs(dir.path()).into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, ["psd_welch_ofdm.csv"]);
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let runs = [
        vec!["psd", "--set", "num_symbols=40", "--set", "analytic_blocks=8", "--set", "n=1"],
        vec!["ber", "--set", "scheme=nc_ofdm", "--set", "snr_db=20,30", "--set", "max_bits=100000"],
        vec!["continuity", "--set", "num_symbols=30"],
    ];
    for args in runs {
        let mut results = Vec::new();
        for workers in ["1", "3"] {
            let dir = tempfile::tempdir().unwrap();
            let mut full = args.clone();
            full.extend(["--workers", workers, "--out-dir", dir.path().to_str().unwrap()]);
            let out = ncofdm(&full);
            assert!(out.status.success(), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
            results.push(csvs(dir.path()));
        }
        let dir = tempfile::tempdir().unwrap();
        let mut seq = args.clone();
        seq.extend(["--sequential", "--out-dir", dir.path().to_str().unwrap()]);
        assert!(ncofdm(&seq).status.success());
        results.push(csvs(dir.path()));
        assert!(!results[0].is_empty());
        assert_eq!(results[0], results[1], "{args:?}");
        assert_eq!(results[0], results[2], "{args:?}");
    }
}

#[test]
fn seed_flag_changes_the_data() {
    let mut texts = Vec::new();
    for seed in ["1", "1", "2"] {
        let dir = tempfile::tempdir().unwrap();
        let out = ncofdm(&[
            "ber",
            "--set",
            "scheme=ofdm",
            "--set",
            "snr_db=8",
            "--set",
            "max_bits=40000",
            "--seed",
            seed,
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
        texts.push(fs::read_to_string(dir.path().join("ber_ofdm.csv")).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    assert_ne!(texts[0], texts[2]);
}
