use std::fs;

use qcthreshold::sweep::{read_records_csv, run_experiment, RunConfig};

fn config(dir: &std::path::Path) -> RunConfig {
    let mut c = RunConfig::default();
    c.set("h_list", "0.2").unwrap();
    c.set("d_rule", "scaled:0,0.1,10").unwrap();
    c.out = Some(dir.to_path_buf());
    c
}

#[test]
fn identical_config_gives_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_experiment(&config(a.path())).unwrap();
    run_experiment(&config(b.path())).unwrap();
    for f in ["records.csv", "summary.json", "bounds.csv", "threshold.csv", "fig2.svg", "fig3.svg", "threshold.svg"] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
    let back = read_records_csv(fs::File::open(a.path().join("records.csv")).unwrap()).unwrap();
    assert_eq!(back.len(), 3);
    for (r, s) in back.iter().zip(&ra.records) {
        assert_eq!(r.discrepancy_g0, s.discrepancy_g0);
        assert!(r.discrepancy_g0 <= r.l1);
    }
}

#[test]
fn records_are_sorted_and_discrepancy_falls() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&config(dir.path())).unwrap();
    let ds: Vec<f64> = out.records.iter().map(|r| r.d).collect();
    assert!(ds.windows(2).all(|w| w[0] < w[1]));
    assert!(out.threshold.crossings[0].monotone);
    assert!(out.records[2].discrepancy_g0 < 0.5 * out.records[0].discrepancy_g0);
    assert!(out.passed());
    let header = fs::read_to_string(dir.path().join("records.csv")).unwrap();
    assert!(header.starts_with("h,D,exponent,discrepancy_g0,l1,quantum_bound,classical_bound,"));
}
