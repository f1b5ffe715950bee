use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcthreshold"))
}

#[test]
fn constants_table() {
    let out = bin().args(["constants"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("c0 0.0641226"), "{text}");
    let js = bin().args(["constants", "--json"]).output().unwrap();
    assert!(String::from_utf8(js.stdout).unwrap().contains("\"c_qu\""));
}

#[test]
fn run_writes_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--h-list", "0.2", "--d-rule", "scaled:0,0.01", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["records.csv", "summary.json", "fig2.svg", "fig3.svg", "bounds.csv", "timing.csv"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let bounds = fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert_eq!(bounds.matches(",PASS").count(), 4);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "h_list = 0.1\nd_rule = abs:0\nfigures = false\n").unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--h-list", "0.2", "--out"])
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let rec = fs::read_to_string(dir.path().join("o/records.csv")).unwrap();
    assert!(rec.lines().nth(1).unwrap().starts_with("0.2,0,"));
    assert!(!dir.path().join("o/fig2.svg").exists());
}

#[test]
fn violated_assumption_is_an_error() {
    let out = bin()
        .args(["bounds", "--h-list", "0.1", "--set", "tau1_factor=0.3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not valid"));
}

#[test]
fn bad_input_is_rejected() {
    let out = bin().args(["run", "--set", "colour=red"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["sweep", "--exponents", "1.5,2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figures_on_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["figures", "--out"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("fig2.svg").exists());
    assert!(!dir.path().join("threshold.svg").exists());
}
