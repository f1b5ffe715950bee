use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qcthreshold::closedform::constants;
use qcthreshold::figures::emit_figures;
use qcthreshold::sweep::{
    bound_check, parse_d_rule, read_records_csv, run_experiment, threshold_analysis, BoundReport, DPoint,
    ExperimentOutput, RunConfig, SweepRecord,
};

#[derive(Parser)]
#[command(name = "qcthreshold", version, about = "Quantum-classical correspondence threshold laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve every (h, D) point and write records, bounds and figures.
    Run(Common),
    /// Exponent sweep D = h^p plus D = 0, with threshold crossing estimates.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Exponents p, e.g. 1,4/3,5/3,2.
        #[arg(long, default_value = "1,4/3,5/3,2")]
        exponents: String,
    },
    /// Measured distances to the closed forms against the Duhamel bounds.
    Bounds(Common),
    /// Write fig2/fig3 (and threshold.svg if records.csv is present).
    Figures {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Print the bound constants for a kick duration.
    Constants {
        #[arg(long, default_value_t = 1.0)]
        tau2: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Flat key = value config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated h values.
    #[arg(long)]
    h_list: Option<String>,
    /// abs:0,1e-4 | exp:1,4/3,zero | scaled:0,0.01,0.1
    #[arg(long)]
    d_rule: Option<String>,
    #[arg(long)]
    tau2: Option<String>,
    /// Points per axis, e.g. 512x512.
    #[arg(long)]
    grid: Option<String>,
    /// Kick substeps per unit time.
    #[arg(long)]
    substeps: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    /// Cross-check against the Schroedinger, Lindblad and Langevin oracles.
    #[arg(long)]
    oracle: bool,
    /// Emit figures (true/false).
    #[arg(long)]
    figures: Option<String>,
    /// Any other config key, as key=value; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p).with_context(|| format!("reading {}", p.display()))?,
            None => RunConfig::default(),
        };
        let flags = [
            ("h_list", &self.h_list),
            ("d_rule", &self.d_rule),
            ("tau2", &self.tau2),
            ("grid", &self.grid),
            ("substeps", &self.substeps),
            ("seed", &self.seed),
            ("figures", &self.figures),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, v).with_context(|| format!("--{}", k.replace('_', "-")))?;
            }
        }
        for kv in &self.set {
            let Some((k, v)) = kv.split_once('=') else {
                bail!("--set expects KEY=VALUE, got {kv:?}");
            };
            cfg.set(k.trim(), v.trim()).with_context(|| format!("--set {kv}"))?;
        }
        if self.oracle {
            cfg.oracle = true;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_records(records: &[SweepRecord]) {
    println!(
        "{:>6} {:>11} {:>8} {:>12} {:>9} {:>10} {:>10} {:>9}",
        "h", "D", "D/h^4/3", "discrepancy", "l1", "q-dist", "c-dist", "grid"
    );
    for r in records {
        println!(
            "{:>6} {:>11.4e} {:>8.3} {:>12.5} {:>9.5} {:>10.3e} {:>10.3e} {:>9}",
            r.h,
            r.d,
            r.d_scaled,
            r.discrepancy_g0,
            r.l1,
            r.quantum_distance,
            r.classical_distance,
            format!("{}x{}", r.nu, r.nv)
        );
    }
}

fn print_bounds(report: &BoundReport) {
    for c in &report.cells {
        println!("{c}");
    }
}

fn finish(out: &ExperimentOutput) -> ExitCode {
    print_records(&out.records);
    print_bounds(&out.bounds);
    for o in &out.oracles {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} oracle {} h={} D={:.4e} l1={:.3e} tol={:.0e}", o.oracle, o.h, o.d, o.l1, o.tolerance);
    }
    for c in &out.threshold.crossings {
        match c.d_star_scaled {
            Some(s) => println!("h={} crossing D*/h^4/3 = {s:.4} monotone={}", c.h, c.monotone),
            None => println!("h={} crossing unresolved monotone={}", c.h, c.monotone),
        }
    }
    if let Some(s) = out.threshold.spread {
        println!("crossing spread {s:.3}");
    }
    if out.passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("FAIL: bound or oracle check failed");
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(common) => Ok(finish(&run_experiment(&common.config()?)?)),
        Command::Sweep { common, exponents } => {
            let mut cfg = common.config()?;
            cfg.d_rule = parse_d_rule(&format!("exp:{exponents},zero"))?;
            let ps: Vec<f64> = cfg.d_rule.iter().filter_map(|d| d.exponent()).collect();
            if !(ps.iter().any(|&p| p < 4.0 / 3.0) && ps.iter().any(|&p| p > 4.0 / 3.0)) {
                bail!("exponents must straddle 4/3");
            }
            Ok(finish(&run_experiment(&cfg)?))
        }
        Command::Bounds(common) => {
            let mut cfg = common.config()?;
            if common.d_rule.is_none() && common.config.is_none() {
                cfg.d_rule = vec![DPoint::Zero, DPoint::Scaled(0.01), DPoint::Scaled(0.1)];
            }
            let report = bound_check(&cfg.h_list, &cfg.d_rule, &cfg)?;
            print_bounds(&report);
            if let Some(dir) = &cfg.out {
                std::fs::create_dir_all(dir)?;
                report.write_csv(std::fs::File::create(dir.join("bounds.csv"))?)?;
            }
            if report.all_pass() {
                println!("all cells PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                for c in report.failures() {
                    eprintln!("offending cell: {c}");
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Figures { out } => {
            let path = out.join("records.csv");
            let records = if path.exists() {
                read_records_csv(std::fs::File::open(&path)?)?
            } else {
                Vec::new()
            };
            let s = emit_figures(&out, &records)?;
            if !records.is_empty() {
                let t = threshold_analysis(&records, constants(1.0)?.c0);
                for c in &t.crossings {
                    println!("h={} d_star_scaled={:?}", c.h, c.d_star_scaled);
                }
            }
            println!(
                "wrote figures to {}: quantum maxima on (0,3) = {}, classical maxima = {}, n=0 difference = {:.5}",
                out.display(),
                s.main_quantum_maxima,
                s.main_classical_maxima,
                s.g0_difference
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Constants { tau2, json } => {
            let k = constants(tau2)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&k)?);
            } else {
                for (name, v) in [
                    ("tau2", k.tau2),
                    ("C1", k.c1),
                    ("C2", k.c2),
                    ("C3", k.c3),
                    ("C4", k.c4),
                    ("C5", k.c5),
                    ("C_qu", k.c_qu),
                    ("C_cl", k.c_cl),
                    ("c_bar", k.c_bar),
                    ("c0", k.c0),
                    ("C", k.c_total),
                ] {
                    println!("{name:>6} {v:.7}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
