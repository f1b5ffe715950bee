//! Experiment harness: threshold sweeps over `(h, D)`, bound checks and the
//! artifacts they write.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{constants, duhamel_bound, FinalPdf, Side};
use crate::error::{Error, Result};
use crate::evolver::{evolve, EvolverConfig, SplittingOrder};
use crate::field::{FieldKind, PhaseSpaceField};
use crate::figures;
use crate::grid::{plan_grid, GridConfig};
use crate::io;
use crate::momentum::{l1_distance, MomentumDistribution, ObservableSpec};
use crate::oracles::{
    coarse_grain, langevin_sample, lindblad_dm_evolve, schrodinger_closed, DensityMatrixField, TrajectoryEnsemble,
    WavefunctionField,
};
use crate::params::SemiclassicalParams;
use crate::schedule::{BumpProfile, BumpShape, Schedule};

/// Allowance for discretisation error in [`bound_check`].
pub const SOLVER_SLACK: f64 = 5e-3;
/// Tolerance on monotone decrease of the discrepancy along `D`.
pub const MONOTONE_TOLERANCE: f64 = 1e-3;
pub const SCHRODINGER_TOLERANCE: f64 = 1e-3;
pub const LINDBLAD_TOLERANCE: f64 = 1e-3;
pub const LANGEVIN_TOLERANCE: f64 = 3e-2;
pub const RECORDS_SCHEMA: &str = "records-v1";

/// One diffusion strength, possibly tied to `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DPoint {
    Zero,
    Absolute(f64),
    /// `D = h^p`
    Exponent(f64),
    /// `D = c h^{4/3}`
    Scaled(f64),
}

impl DPoint {
    pub fn resolve(self, h: f64) -> f64 {
        match self {
            DPoint::Zero => 0.0,
            DPoint::Absolute(d) => d,
            DPoint::Exponent(p) => h.powf(p),
            DPoint::Scaled(c) => c * h.powf(4.0 / 3.0),
        }
    }

    pub fn exponent(self) -> Option<f64> {
        match self {
            DPoint::Exponent(p) => Some(p),
            _ => None,
        }
    }
}

/// Parses `4/3`, `1e-3` and plain decimals.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a number: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a / b)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_number).collect()
}

/// `abs:0,1e-4`, `exp:1,4/3,5/3,2,zero` or `scaled:0,0.01,0.1`. The token
/// `zero` adds `D = 0` in any mode.
pub fn parse_d_rule(s: &str) -> Result<Vec<DPoint>> {
    let (mode, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidParameter(format!("d rule needs a mode prefix: {s:?}")))?;
    let mut out = Vec::new();
    for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if tok == "zero" {
            out.push(DPoint::Zero);
            continue;
        }
        let x = parse_number(tok)?;
        out.push(match mode.trim() {
            "abs" if x == 0.0 => DPoint::Zero,
            "abs" => DPoint::Absolute(x),
            "exp" => DPoint::Exponent(x),
            "scaled" if x == 0.0 => DPoint::Zero,
            "scaled" => DPoint::Scaled(x),
            m => return Err(Error::InvalidParameter(format!("unknown d rule mode {m:?}"))),
        });
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("d rule lists no values".into()));
    }
    Ok(out)
}

fn format_d_rule(rule: &[DPoint]) -> String {
    let mode = match rule.iter().find(|d| !matches!(d, DPoint::Zero)) {
        Some(DPoint::Absolute(_)) | None => "abs",
        Some(DPoint::Exponent(_)) => "exp",
        Some(DPoint::Scaled(_)) => "scaled",
        Some(DPoint::Zero) => unreachable!(),
    };
    let items: Vec<String> = rule
        .iter()
        .map(|d| match *d {
            DPoint::Zero => "zero".to_string(),
            DPoint::Absolute(x) | DPoint::Exponent(x) | DPoint::Scaled(x) => x.to_string(),
        })
        .collect();
    format!("{mode}:{}", items.join(","))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub h_list: Vec<f64>,
    pub d_rule: Vec<DPoint>,
    pub tau2: f64,
    pub bump: BumpShape,
    /// Forces `tau1 = tau1_factor log(1/h)`.
    pub tau1_factor: Option<f64>,
    pub grid: GridConfig,
    pub evolver: EvolverConfig,
    pub seed: u64,
    pub oracle: bool,
    pub oracle_samples: usize,
    pub figures: bool,
    pub snapshots: bool,
    pub memory_budget: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            h_list: vec![0.2, 0.1, 0.05],
            d_rule: vec![
                DPoint::Zero,
                DPoint::Exponent(1.0),
                DPoint::Exponent(4.0 / 3.0),
                DPoint::Exponent(5.0 / 3.0),
                DPoint::Exponent(2.0),
            ],
            tau2: 1.0,
            bump: BumpShape::default(),
            tau1_factor: None,
            grid: GridConfig::default(),
            evolver: EvolverConfig::default(),
            seed: 2024,
            oracle: false,
            oracle_samples: 1_000_000,
            figures: true,
            snapshots: false,
            memory_budget: 4 << 30,
            out: None,
        }
    }
}

fn parse_bool(v: &str) -> Result<bool> {
    match v.trim() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::InvalidParameter(format!("not a boolean: {v:?}"))),
    }
}

fn parse_usize(v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("not a nonnegative integer: {v:?}")))
}

impl RunConfig {
    /// Reads flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k.trim(), v.trim())
                .map_err(|e| Error::InvalidParameter(format!("line {}: {e}", n + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Applies one setting; the same keys serve the config file and the CLI.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.replace('-', "_").as_str() {
            "h_list" => self.h_list = parse_list(value)?,
            "d_rule" => self.d_rule = parse_d_rule(value)?,
            "tau2" => self.tau2 = parse_number(value)?,
            "bump" => self.bump = BumpShape::parse(value)?,
            "tau1_factor" => self.tau1_factor = Some(parse_number(value)?),
            "grid" => {
                let (a, b) = value
                    .split_once('x')
                    .ok_or_else(|| Error::InvalidParameter(format!("grid must look like 512x512, got {value:?}")))?;
                self.grid.nu = parse_usize(a)?;
                self.grid.nv = parse_usize(b)?;
            }
            "u_range" | "v_range" => {
                let r = parse_list(value)?;
                if r.len() != 2 {
                    return Err(Error::InvalidParameter(format!("{key} needs two values")));
                }
                if key.starts_with('u') {
                    (self.grid.u_min, self.grid.u_max) = (r[0], r[1]);
                } else {
                    (self.grid.v_min, self.grid.v_max) = (r[0], r[1]);
                }
            }
            "substeps" => self.evolver.substeps_per_unit = parse_usize(value)?,
            "splitting" => self.evolver.splitting = SplittingOrder::from_order(parse_usize(value)? as u32)?,
            "seed" => self.seed = value.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad seed {value:?}")))?,
            "oracle" => self.oracle = parse_bool(value)?,
            "oracle_samples" => self.oracle_samples = parse_usize(value)?,
            "figures" => self.figures = parse_bool(value)?,
            "snapshots" => self.snapshots = parse_bool(value)?,
            "memory_mib" => self.memory_budget = parse_usize(value)? << 20,
            "out" => self.out = Some(PathBuf::from(value)),
            k => return Err(Error::InvalidParameter(format!("unknown key {k:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.h_list.is_empty() {
            return Err(Error::InvalidParameter("h list is empty".into()));
        }
        if let Some(h) = self.h_list.iter().find(|h| !(**h > 0.0 && **h < 1.0)) {
            return Err(Error::InvalidParameter(format!("h must lie in (0, 1), got {h}")));
        }
        if !(self.tau2 > 0.0 && self.tau2.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau2 must be positive, got {}", self.tau2)));
        }
        if self.d_rule.is_empty() {
            return Err(Error::InvalidParameter("d rule is empty".into()));
        }
        if self.oracle && self.oracle_samples == 0 {
            return Err(Error::InvalidParameter("oracle_samples must be positive".into()));
        }
        self.grid.validate()?;
        self.evolver.validate()
    }

    pub fn schedule(&self, h: f64) -> Result<Schedule> {
        let s = Schedule::standard_with_tau2(h, self.tau2)?;
        let s = match self.tau1_factor {
            Some(f) => {
                let [_, t2, t3] = s.tau();
                Schedule::new(f * (1.0 / h).ln(), t2, t3)?
            }
            None => s,
        };
        Ok(s.with_bump(BumpProfile::new(self.bump)))
    }

    /// Canonical `key = value` form; [`RunConfig::parse`] reads it back.
    pub fn to_text(&self) -> String {
        let hs: Vec<String> = self.h_list.iter().map(|h| h.to_string()).collect();
        let mut s = format!(
            "h_list = {}\nd_rule = {}\ntau2 = {}\nbump = {}\n",
            hs.join(","),
            format_d_rule(&self.d_rule),
            self.tau2,
            self.bump.name()
        );
        if let Some(f) = self.tau1_factor {
            s += &format!("tau1_factor = {f}\n");
        }
        s += &format!(
            "grid = {}x{}\nu_range = {},{}\nv_range = {},{}\nsubsteps = {}\nsplitting = {}\nseed = {}\noracle = {}\noracle_samples = {}\nfigures = {}\nsnapshots = {}\nmemory_mib = {}\n",
            self.grid.nu,
            self.grid.nv,
            self.grid.u_min,
            self.grid.u_max,
            self.grid.v_min,
            self.grid.v_max,
            self.evolver.substeps_per_unit,
            match self.evolver.splitting {
                SplittingOrder::Lie => 1,
                SplittingOrder::Strang => 2,
            },
            self.seed,
            self.oracle,
            self.oracle_samples,
            self.figures,
            self.snapshots,
            self.memory_budget >> 20
        );
        s
    }
}

/// One `(h, D)` point. Column order here is the `records.csv` header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub h: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub exponent: Option<f64>,
    pub discrepancy_g0: f64,
    pub l1: f64,
    pub quantum_bound: Option<f64>,
    pub classical_bound: Option<f64>,
    /// `D / h^{4/3}`
    pub d_scaled: f64,
    /// `|| q_3 - q_3^closed ||_1`
    pub quantum_distance: f64,
    pub classical_distance: f64,
    pub nu: usize,
    pub nv: usize,
    pub substeps: usize,
    pub kick_substeps: usize,
    #[serde(skip)]
    pub wall_time: f64,
}

const RECORD_COLUMNS: [&str; 14] = [
    "h",
    "D",
    "exponent",
    "discrepancy_g0",
    "l1",
    "quantum_bound",
    "classical_bound",
    "d_scaled",
    "quantum_distance",
    "classical_distance",
    "nu",
    "nv",
    "substeps",
    "kick_substeps",
];

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl SweepRecord {
    pub fn header() -> &'static [&'static str] {
        &RECORD_COLUMNS
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.h.to_string(),
            self.d.to_string(),
            opt(self.exponent),
            self.discrepancy_g0.to_string(),
            self.l1.to_string(),
            opt(self.quantum_bound),
            opt(self.classical_bound),
            self.d_scaled.to_string(),
            self.quantum_distance.to_string(),
            self.classical_distance.to_string(),
            self.nu.to_string(),
            self.nv.to_string(),
            self.substeps.to_string(),
            self.kick_substeps.to_string(),
        ]
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        k => Error::Format(format!("{k:?}")),
    }
}

pub fn write_records_csv<W: Write>(w: W, records: &[SweepRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SweepRecord::header()).map_err(csv_err)?;
    for r in records {
        out.write_record(r.row()).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records_csv<R: std::io::Read>(r: R) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::Reader::from_reader(r);
    let head = rd.headers().map_err(csv_err)?.clone();
    if head.iter().ne(RECORD_COLUMNS.iter().copied()) {
        return Err(Error::Format(format!("unexpected records header {head:?}")));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let f = |k: usize| -> Result<f64> {
            rec[k].parse().map_err(|_| Error::Format(format!("bad value {:?} in {}", &rec[k], RECORD_COLUMNS[k])))
        };
        let o = |k: usize| -> Result<Option<f64>> { if rec[k].is_empty() { Ok(None) } else { f(k).map(Some) } };
        let u = |k: usize| -> Result<usize> {
            rec[k].parse().map_err(|_| Error::Format(format!("bad value {:?} in {}", &rec[k], RECORD_COLUMNS[k])))
        };
        out.push(SweepRecord {
            h: f(0)?,
            d: f(1)?,
            exponent: o(2)?,
            discrepancy_g0: f(3)?,
            l1: f(4)?,
            quantum_bound: o(5)?,
            classical_bound: o(6)?,
            d_scaled: f(7)?,
            quantum_distance: f(8)?,
            classical_distance: f(9)?,
            nu: u(10)?,
            nv: u(11)?,
            substeps: u(12)?,
            kick_substeps: u(13)?,
            wall_time: 0.0,
        });
    }
    Ok(out)
}

/// A planned sweep point.
#[derive(Debug, Clone)]
struct Task {
    h: f64,
    point: DPoint,
    d: f64,
    schedule: Schedule,
    params: SemiclassicalParams,
    grid: GridConfig,
}

/// Marginals kept next to a record.
#[derive(Debug, Clone, PartialEq)]
pub struct PointOutput {
    pub record: SweepRecord,
    pub quantum: MomentumDistribution,
    pub classical: MomentumDistribution,
    pub oracles: Vec<OracleCheck>,
    pub snapshots: Vec<PhaseSpaceField>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub h: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub oracle: String,
    pub l1: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn plan(config: &RunConfig) -> Result<Vec<Task>> {
    config.validate()?;
    let mut tasks = Vec::new();
    for &h in &config.h_list {
        let schedule = config.schedule(h)?;
        let mut seen: Vec<f64> = Vec::new();
        for &point in &config.d_rule {
            let d = point.resolve(h);
            if seen.iter().any(|&x| x == d) {
                continue;
            }
            seen.push(d);
            let params = SemiclassicalParams::from_h(h, d)?;
            let grid = plan_grid(&config.grid, &schedule, &params, config.memory_budget)?;
            tasks.push(Task {
                h,
                point,
                d,
                schedule: schedule.clone(),
                params,
                grid,
            });
        }
    }
    tasks.sort_by(|a, b| a.h.total_cmp(&b.h).then(a.d.total_cmp(&b.d)));
    Ok(tasks)
}

fn closed_distance(
    m: &MomentumDistribution,
    side: Side,
    schedule: &Schedule,
    h: f64,
) -> Result<f64> {
    let pdf = FinalPdf::new(side, schedule.tau(), h)?;
    let closed = pdf.sample(m.p0, m.dp, m.len())?;
    l1_distance(m, &closed)
}

fn optional_bound(side: Side, h: f64, d: f64, schedule: &Schedule) -> Result<Option<f64>> {
    match duhamel_bound(side, h, d, schedule) {
        Ok(b) => Ok(Some(b)),
        Err(Error::Validity(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_task(task: &Task, config: &RunConfig) -> Result<PointOutput> {
    let start = Instant::now();
    let mut marginals = Vec::with_capacity(2);
    let mut kick_substeps = 0;
    let mut snapshots = Vec::new();
    for kind in [FieldKind::QuantumWigner, FieldKind::Classical] {
        let f0 = PhaseSpaceField::initial_coherent(&task.params, &task.grid, kind)?;
        let out = evolve(&f0, &task.schedule, &task.params, &config.evolver)?;
        kick_substeps = out.diagnostics.kick_substeps;
        marginals.push(out.final_field.momentum_marginal());
        if config.snapshots {
            snapshots.extend(out.snapshots);
        }
    }
    let classical = marginals.pop().unwrap();
    let quantum = marginals.pop().unwrap();
    let g0 = ObservableSpec::g0();
    let (h, d) = (task.h, task.d);
    let s = &task.schedule;
    let record = SweepRecord {
        h,
        d,
        exponent: task.point.exponent(),
        d_scaled: d / h.powf(4.0 / 3.0),
        discrepancy_g0: (quantum.expect(g0) - classical.expect(g0)).abs(),
        l1: l1_distance(&quantum, &classical)?,
        quantum_bound: optional_bound(Side::Quantum, h, d, s)?,
        classical_bound: optional_bound(Side::Classical, h, d, s)?,
        quantum_distance: closed_distance(&quantum, Side::Quantum, s, h)?,
        classical_distance: closed_distance(&classical, Side::Classical, s, h)?,
        nu: task.grid.nu,
        nv: task.grid.nv,
        substeps: config.evolver.substeps_per_unit,
        kick_substeps,
        wall_time: 0.0,
    };
    let oracles = if config.oracle {
        run_oracles(task, config, &quantum, &classical)?
    } else {
        Vec::new()
    };
    Ok(PointOutput {
        record: SweepRecord {
            wall_time: start.elapsed().as_secs_f64(),
            ..record
        },
        quantum,
        classical,
        oracles,
        snapshots,
    })
}

fn check(task: &Task, oracle: &str, l1: f64, tolerance: f64) -> OracleCheck {
    OracleCheck {
        h: task.h,
        d: task.d,
        oracle: oracle.to_string(),
        l1,
        tolerance,
        passed: l1 <= tolerance,
    }
}

/// Independent solvers against the spectral marginals. The pure-state oracle
/// only applies at `D = 0`.
fn run_oracles(
    task: &Task,
    config: &RunConfig,
    quantum: &MomentumDistribution,
    classical: &MomentumDistribution,
) -> Result<Vec<OracleCheck>> {
    let (h, s, p) = (task.h, &task.schedule, &task.params);
    let mut out = Vec::new();
    if task.d == 0.0 {
        let psi = WavefunctionField::coherent(h, 1024, 9.0)?;
        let states = schrodinger_closed(&psi, s, h)?;
        let m = states[3].momentum_distribution(quantum.p0, quantum.dp, quantum.len());
        let closed = FinalPdf::new(Side::Quantum, s.tau(), h)?.sample(quantum.p0, quantum.dp, quantum.len())?;
        out.push(check(task, "schrodinger", l1_distance(&m, &closed)?, SCHRODINGER_TOLERANCE));
    }
    let rho = DensityMatrixField::coherent(h, 512, 16.0)?;
    let dm = lindblad_dm_evolve(&rho, s, p, config.evolver.substeps_per_unit)?;
    let m = dm[3].momentum_distribution(quantum.p0, quantum.dp, quantum.len());
    out.push(check(task, "lindblad", l1_distance(&m, quantum)?, LINDBLAD_TOLERANCE));
    let ens = TrajectoryEnsemble::coherent(h, config.oracle_samples, config.seed)?;
    let traj = langevin_sample(&ens, s, p, 1e-3, config.seed.wrapping_add(1))?;
    let coarse = coarse_grain(classical, 2);
    let hist = traj[3].momentum_histogram(classical.p0 - 0.5 * classical.dp, coarse.dp, coarse.len());
    out.push(check(task, "langevin", l1_distance(&hist, &coarse)?, LANGEVIN_TOLERANCE));
    Ok(out)
}

/// Runs every planned point; all grids are planned (and the memory budget
/// checked) before the first evolution starts.
pub fn run_points(config: &RunConfig) -> Result<Vec<PointOutput>> {
    let tasks = plan(config)?;
    #[cfg(feature = "parallel")]
    let out: Result<Vec<PointOutput>> = tasks.par_iter().map(|t| run_task(t, config)).collect();
    #[cfg(not(feature = "parallel"))]
    let out: Result<Vec<PointOutput>> = tasks.iter().map(|t| run_task(t, config)).collect();
    out
}

/// One `bounds.csv` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCell {
    pub h: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub side: String,
    pub measured: f64,
    pub bound: Option<f64>,
    pub passed: Option<bool>,
}

impl BoundCell {
    pub fn status(&self) -> &'static str {
        match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "N/A",
        }
    }
}

impl fmt::Display for BoundCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} h={} D={:.4e} {:<9} measured={:.4e} bound={}",
            self.status(),
            self.h,
            self.d,
            self.side,
            self.measured,
            self.bound.map(|b| format!("{:.4e}+{SOLVER_SLACK}", b)).unwrap_or_else(|| "-".into())
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub cells: Vec<BoundCell>,
}

impl BoundReport {
    pub fn from_records(records: &[SweepRecord]) -> Self {
        let mut cells = Vec::with_capacity(2 * records.len());
        for r in records {
            for (side, measured, bound) in [
                (Side::Quantum, r.quantum_distance, r.quantum_bound),
                (Side::Classical, r.classical_distance, r.classical_bound),
            ] {
                cells.push(BoundCell {
                    h: r.h,
                    d: r.d,
                    side: side.name().to_string(),
                    measured,
                    bound,
                    passed: bound.map(|b| measured <= b + SOLVER_SLACK),
                });
            }
        }
        Self { cells }
    }

    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.passed != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCell> {
        self.cells.iter().filter(|c| c.passed == Some(false))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["h", "D", "side", "measured", "bound", "slack", "status"])
            .map_err(csv_err)?;
        for c in &self.cells {
            out.write_record([
                c.h.to_string(),
                c.d.to_string(),
                c.side.clone(),
                c.measured.to_string(),
                opt(c.bound),
                SOLVER_SLACK.to_string(),
                c.status().to_string(),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Measured distances to the closed forms against the Duhamel bounds for
/// every `(h, D)`. Fails with a validity error, before any evolution, when a
/// schedule breaks the technical assumption.
pub fn bound_check(h_list: &[f64], d_list: &[DPoint], base: &RunConfig) -> Result<BoundReport> {
    let config = RunConfig {
        h_list: h_list.to_vec(),
        d_rule: d_list.to_vec(),
        oracle: false,
        ..base.clone()
    };
    config.validate()?;
    for &h in h_list {
        let s = config.schedule(h)?;
        if !s.technical_ok(h) {
            return Err(Error::Validity(format!(
                "tau1 = {:.4} breaks tau1 < log(1/h)/4 = {:.4} at h = {h}",
                s.tau()[0],
                0.25 * (1.0 / h).ln()
            )));
        }
    }
    let records: Vec<SweepRecord> = run_points(&config)?.into_iter().map(|p| p.record).collect();
    Ok(BoundReport::from_records(&records))
}

/// `D*` where the discrepancy falls to `c0 / 2` for one `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub h: f64,
    pub d_star: Option<f64>,
    /// `D* / h^{4/3}`
    pub d_star_scaled: Option<f64>,
    /// Discrepancy nonincreasing in `D` within [`MONOTONE_TOLERANCE`].
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub target: f64,
    pub crossings: Vec<Crossing>,
    /// Largest over smallest resolved `D* / h^{4/3}`.
    pub spread: Option<f64>,
}

/// Interpolates the `c0 / 2` crossing in `log D` between the two bracketing
/// positive diffusion strengths of each `h`.
pub fn threshold_analysis(records: &[SweepRecord], c0: f64) -> ThresholdReport {
    let target = 0.5 * c0;
    let mut hs: Vec<f64> = records.iter().map(|r| r.h).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    let crossings: Vec<Crossing> = hs
        .iter()
        .map(|&h| {
            let mut rs: Vec<&SweepRecord> = records.iter().filter(|r| r.h == h).collect();
            rs.sort_by(|a, b| a.d.total_cmp(&b.d));
            let monotone = rs
                .windows(2)
                .all(|w| w[1].discrepancy_g0 <= w[0].discrepancy_g0 + MONOTONE_TOLERANCE);
            let pos: Vec<&&SweepRecord> = rs.iter().filter(|r| r.d > 0.0).collect();
            let d_star = pos.windows(2).find_map(|w| {
                let (a, b) = (w[0], w[1]);
                if a.discrepancy_g0 >= target && b.discrepancy_g0 < target {
                    let t = (a.discrepancy_g0 - target) / (a.discrepancy_g0 - b.discrepancy_g0);
                    Some((a.d.ln() + t * (b.d.ln() - a.d.ln())).exp())
                } else {
                    None
                }
            });
            Crossing {
                h,
                d_star,
                d_star_scaled: d_star.map(|d| d / h.powf(4.0 / 3.0)),
                monotone,
            }
        })
        .collect();
    let scaled: Vec<f64> = crossings.iter().filter_map(|c| c.d_star_scaled).collect();
    let spread = if scaled.len() >= 2 {
        let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = scaled.iter().copied().fold(0.0, f64::max);
        Some(hi / lo)
    } else {
        None
    };
    ThresholdReport {
        target,
        crossings,
        spread,
    }
}

/// Exponent sweep `D = h^p` plus `D = 0` for each `h`.
pub fn threshold_sweep(h_list: &[f64], exponents: &[f64], base: &RunConfig) -> Result<(Vec<SweepRecord>, ThresholdReport)> {
    if !(exponents.iter().any(|&p| p < 4.0 / 3.0) && exponents.iter().any(|&p| p > 4.0 / 3.0)) {
        return Err(Error::InvalidParameter("exponents must straddle 4/3".into()));
    }
    let mut d_rule = vec![DPoint::Zero];
    d_rule.extend(exponents.iter().map(|&p| DPoint::Exponent(p)));
    let config = RunConfig {
        h_list: h_list.to_vec(),
        d_rule,
        ..base.clone()
    };
    let records: Vec<SweepRecord> = run_points(&config)?.into_iter().map(|p| p.record).collect();
    let c0 = constants(config.tau2)?.c0;
    let report = threshold_analysis(&records, c0);
    Ok((records, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Summary<'a> {
    schema: &'static str,
    code_version: &'static str,
    config: &'a RunConfig,
    records: &'a [SweepRecord],
    bounds_pass: bool,
    oracles: &'a [OracleCheck],
    oracles_pass: bool,
    threshold: &'a ThresholdReport,
}

/// Everything a sweep produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<SweepRecord>,
    pub bounds: BoundReport,
    pub oracles: Vec<OracleCheck>,
    pub threshold: ThresholdReport,
    pub points: Vec<PointOutput>,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.bounds.all_pass() && self.oracles.iter().all(|o| o.passed)
    }
}

fn slug(h: f64, d: f64) -> String {
    format!("h{h}_D{d:.6e}")
}

/// Runs the sweep and, when `config.out` is set, writes `records.csv`,
/// `summary.json`, `bounds.csv`, `timing.csv`, `threshold.csv`, the
/// marginals and (with `figures`) `fig2.svg`, `fig3.svg` and
/// `threshold.svg`.
pub fn run_experiment(config: &RunConfig) -> Result<ExperimentOutput> {
    let points = run_points(config)?;
    let records: Vec<SweepRecord> = points.iter().map(|p| p.record.clone()).collect();
    let oracles: Vec<OracleCheck> = points.iter().flat_map(|p| p.oracles.clone()).collect();
    let bounds = BoundReport::from_records(&records);
    let threshold = threshold_analysis(&records, constants(config.tau2)?.c0);
    let out = ExperimentOutput {
        records,
        bounds,
        oracles,
        threshold,
        points,
    };
    if let Some(dir) = &config.out {
        write_artifacts(dir, config, &out)?;
    }
    Ok(out)
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    Ok(std::io::BufWriter::new(fs::File::create(path)?))
}

fn write_artifacts(dir: &Path, config: &RunConfig, out: &ExperimentOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_records_csv(create(&dir.join("records.csv"))?, &out.records)?;
    out.bounds.write_csv(create(&dir.join("bounds.csv"))?)?;

    let mut t = create(&dir.join("timing.csv"))?;
    writeln!(t, "h,D,wall_time")?;
    for r in &out.records {
        writeln!(t, "{},{},{:.3}", r.h, r.d, r.wall_time)?;
    }
    t.flush()?;

    let mut th = create(&dir.join("threshold.csv"))?;
    writeln!(th, "h,d_star,d_star_scaled,monotone")?;
    for c in &out.threshold.crossings {
        writeln!(th, "{},{},{},{}", c.h, opt(c.d_star), opt(c.d_star_scaled), c.monotone)?;
    }
    th.flush()?;

    if config.oracle {
        let mut o = create(&dir.join("oracles.csv"))?;
        writeln!(o, "h,D,oracle,l1,tolerance,status")?;
        for c in &out.oracles {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(o, "{},{},{},{},{},{status}", c.h, c.d, c.oracle, c.l1, c.tolerance)?;
        }
        o.flush()?;
    }

    let marg = dir.join("marginals");
    fs::create_dir_all(&marg)?;
    for p in &out.points {
        let s = slug(p.record.h, p.record.d);
        io::write_marginal_csv(create(&marg.join(format!("{s}_quantum.csv")))?, &p.quantum)?;
        io::write_marginal_csv(create(&marg.join(format!("{s}_classical.csv")))?, &p.classical)?;
        if !p.snapshots.is_empty() {
            let snaps = dir.join("snapshots");
            fs::create_dir_all(&snaps)?;
            for (k, f) in p.snapshots.iter().enumerate() {
                let name = format!("{s}_{}_t{}.bin", f.kind.name(), k % 4);
                io::save_field(&snaps.join(name), f)?;
            }
        }
    }

    let summary = Summary {
        schema: RECORDS_SCHEMA,
        code_version: env!("CARGO_PKG_VERSION"),
        config,
        records: &out.records,
        bounds_pass: out.bounds.all_pass(),
        oracles: &out.oracles,
        oracles_pass: out.oracles.iter().all(|o| o.passed),
        threshold: &out.threshold,
    };
    let mut js = create(&dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut js, &summary)?;
    writeln!(js)?;
    js.flush()?;

    if config.figures {
        figures::emit_figures(dir, &out.records)?;
    }
    Ok(())
}
