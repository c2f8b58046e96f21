//! The `moclab` binary: exit codes, output layout and determinism.

use std::fs;
use std::path::Path;
use std::process::Command;

fn moclab(out: &Path, args: &[&str], seed: Option<&str>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_moclab"));
    cmd.arg("--out").arg(out).args(args).env_remove("MOCLAB_SEED");
    if let Some(s) = seed {
        cmd.env("MOCLAB_SEED", s);
    }
    let o = cmd.output().unwrap();
    let text = String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr);
    (o.status.code().unwrap(), text)
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(moclab(&a, &["reproduce", "fig2"], None).0, 0);
    assert_eq!(moclab(&b, &["reproduce", "fig2"], None).0, 0);
    let (fa, fb) = (csv_files(&a.join("fig2")), csv_files(&b.join("fig2")));
    assert_eq!(fa.len(), 4, "three spectra and a series");
    assert_eq!(fa, fb);
    let header = String::from_utf8_lossy(&fa.iter().find(|f| f.0 == "spectrum_100.csv").unwrap().1).lines().next().unwrap().to_string();
    assert_eq!(header, "k,kh,abs_s1_plus,abs_s3_plus,abs_s1_minus,abs_s3_minus");
}

#[test]
fn seed_override_changes_noise_and_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(moclab(&a, &["reproduce", "fig2"], Some("77")).0, 0);
    assert_eq!(moclab(&b, &["reproduce", "fig2"], None).0, 0);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("fig2/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["master_seed"], 77);
    assert_eq!(summary["code_fingerprint"].as_str().unwrap().len(), 64);
    assert!(summary["metrics"].as_array().unwrap().iter().all(|m| m["pass"].is_boolean()));
    assert_ne!(fs::read(a.join("fig2/series.csv")).unwrap(), fs::read(b.join("fig2/series.csv")).unwrap());
}

#[test]
fn exit_codes_follow_the_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();

    let missed = write_config(out, "[tight]\nprotocol = growth\nL = 4\nh = 0.05\nperiods = 2\ngrowth_range = 100, 200\n");
    assert_eq!(moclab(out, &["run", &missed], None).0, 2);

    let (code, text) = moclab(out, &["run", &write_config(out, "h = 0.3\nL = 1\nscheme = cranknicolson\n")], None);
    assert_eq!(code, 3);
    assert!(text.contains("line 1") && text.contains("line 3"), "{text}");
    assert_eq!(moclab(out, &["reproduce", "fig99"], None).0, 3);
    assert_eq!(moclab(out, &["reproduce", "fig2"], Some("not-a-number")).0, 3);
    assert_eq!(moclab(out, &["vn", "--scheme", "rk9", "--h", "0.1"], None).0, 3);

    // leapfrog grows like e^{1.5 t}: noise reaches the blow-up threshold well before t = 40
    let blowup = write_config(out, "[lf]\nprotocol = growth\nscheme = lf\nL = 4\nh = 0.05\ntimes = 10, 40\n");
    assert_eq!(moclab(out, &["run", &blowup], None).0, 4);
}

#[test]
fn analysis_commands_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    assert_eq!(moclab(out, &["vn", "--scheme", "se", "--h", "0.01"], None).0, 0);
    assert_eq!(moclab(out, &["eigs", "--scheme", "se", "--L", "2", "--h", "0.05"], None).0, 0);
    assert_eq!(moclab(out, &["scan-lf", "--L", "50", "--h", "0.01", "--points", "401"], None).0, 0);
    let eigs = fs::read_to_string(out.join("eigs.csv")).unwrap();
    assert_eq!(eigs.lines().next().unwrap(), "re,im,abs");
    assert_eq!(eigs.lines().count(), 1 + 4 * 41);
    let scan = fs::read_to_string(out.join("detphi_scan.csv")).unwrap();
    assert_eq!(scan.lines().count(), 402);
    assert!(fs::read_to_string(out.join("vn.csv")).unwrap().starts_with("kh,abs_lambda_1"));
}
