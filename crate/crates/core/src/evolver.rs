//! Split-step spectral evolution through the three-step schedule.
//!
//! The stretch and squeeze flows are carried by the frame, so steps 1 and 3
//! change only the frame and apply one exact diffusion multiplier each. The
//! kick runs in the `(u, k_v)` representation, where the transport and the
//! quantum third-derivative term are a single phase and `v`-diffusion is
//! diagonal; only `u`-diffusion is split off.

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldKind, PhaseSpaceField};
use crate::fourier::{odd_wavenumbers, transpose, wavenumbers, Plan2};
use crate::frame::AffineFrame;
pub use crate::frame::linear_frame_substep;
use crate::grid::Grid;
use crate::momentum::l1_distance;
use crate::params::SemiclassicalParams;
use crate::schedule::Schedule;

pub const MASS_TOLERANCE: f64 = 1e-4;
pub const NEGATIVITY_TOLERANCE: f64 = 1e-6;
pub const SPECTRAL_TAIL_TOLERANCE: f64 = 1e-8;
pub const EDGE_WARNING: f64 = 1e-10;
pub const EDGE_FAILURE: f64 = 1e-6;
pub const POINTS_PER_SQRT_H: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplittingOrder {
    Lie,
    Strang,
}

impl SplittingOrder {
    pub fn from_order(n: u32) -> Result<Self> {
        match n {
            1 => Ok(SplittingOrder::Lie),
            2 => Ok(SplittingOrder::Strang),
            _ => Err(Error::InvalidParameter(format!("splitting order must be 1 or 2, got {n}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FramePolicy {
    /// Snapshots stay in the frame that carries the flow.
    CoMoving,
    /// Snapshots are resampled onto the input field's frame and grid.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolverConfig {
    /// Kick substeps per unit time when `D > 0`.
    pub substeps_per_unit: usize,
    pub splitting: SplittingOrder,
    pub frame_policy: FramePolicy,
    /// Check mass every this many kick substeps (0: checkpoints only).
    pub diagnostics_every: usize,
}

impl Default for EvolverConfig {
    fn default() -> Self {
        Self {
            substeps_per_unit: 200,
            splitting: SplittingOrder::Strang,
            frame_policy: FramePolicy::CoMoving,
            diagnostics_every: 0,
        }
    }
}

impl EvolverConfig {
    pub fn with_substeps(mut self, n: usize) -> Self {
        self.substeps_per_unit = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.substeps_per_unit == 0 {
            return Err(Error::InvalidParameter("substeps per unit time must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest `|mass - mass_0|` seen.
    pub mass_drift: f64,
    /// Smallest value over the largest, across snapshots.
    pub min_relative: f64,
    /// `(u_band, v_band)` edge mass at each checkpoint.
    pub edge_mass: [(f64, f64); 4],
    /// Mass reached the `u` edges during step 3. Step 3 has no kick, so the
    /// periodic wrap in `u` leaves the momentum marginal exact; only the
    /// position marginal at checkpoint 3 is affected.
    pub u_wrap_step3: bool,
    /// Edge mass above [`EDGE_WARNING`] somewhere before step 3.
    pub edge_warning: bool,
    /// Spectral power share beyond 3/4 of Nyquist after the kick, `(u, v)`.
    pub spectral_tail: (f64, f64),
    pub kick_substeps: usize,
}

#[derive(Debug, Clone)]
pub struct EvolveOutput {
    pub final_field: PhaseSpaceField,
    /// States at `t0..t3`.
    pub snapshots: Vec<PhaseSpaceField>,
    pub diagnostics: Diagnostics,
}

fn for_rows<F>(data: &mut [Complex64], len: usize, f: F)
where
    F: Fn(usize, &mut [Complex64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(len).enumerate().for_each(|(m, r)| f(m, r));
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(len).enumerate().for_each(|(m, r)| f(m, r));
}

struct Kernel {
    grid: Grid,
    plan: Plan2,
    ku: Vec<f64>,
    kv: Vec<f64>,
    kv_odd: Vec<f64>,
    work: Vec<Complex64>,
    spare: Vec<Complex64>,
}

impl Kernel {
    fn new(grid: Grid) -> Self {
        Self {
            grid,
            plan: Plan2::new(grid.nu, grid.nv),
            ku: wavenumbers(grid.nu, grid.du),
            kv: wavenumbers(grid.nv, grid.dv),
            kv_odd: odd_wavenumbers(grid.nv, grid.dv),
            work: vec![Complex64::default(); grid.len()],
            spare: vec![Complex64::default(); grid.len()],
        }
    }

    fn load(&mut self, values: &[f64]) {
        for (w, &v) in self.work.iter_mut().zip(values) {
            *w = Complex64::new(v, 0.0);
        }
    }

    fn store(&self, values: &mut [f64]) {
        for (v, w) in values.iter_mut().zip(&self.work) {
            *v = w.re;
        }
    }

    /// Heat kernel with added frame variances `(cu, cv)`:
    /// multiplier `exp(-(cu k_u^2 + cv k_v^2) / 2)`.
    fn diffuse(&mut self, values: &mut [f64], cu: f64, cv: f64) {
        if cu == 0.0 && cv == 0.0 {
            return;
        }
        self.load(values);
        self.plan.full(&mut self.work, false);
        let (ku, kv) = (&self.ku, &self.kv);
        let nv = self.grid.nv;
        for_rows(&mut self.work, nv, |i, row| {
            let a = cu * ku[i] * ku[i];
            for (z, k) in row.iter_mut().zip(kv) {
                *z *= (-0.5 * (a + cv * k * k)).exp();
            }
        });
        self.plan.full(&mut self.work, true);
        self.store(values);
    }

    /// Kick of total strength `sum(deltas)` with diffusion `d` over substeps of
    /// length `dt`, in frame `frame`. Returns the largest mass drift seen at
    /// the diagnostic cadence.
    #[allow(clippy::too_many_arguments)]
    fn kick(
        &mut self,
        values: &mut [f64],
        frame: AffineFrame,
        h: f64,
        kappa: f64,
        deltas: &[f64],
        d: f64,
        dt: f64,
        order: SplittingOrder,
        every: usize,
    ) -> f64 {
        let g = self.grid;
        let (nu, nv) = (g.nu, g.nv);
        let (sx, sp) = (frame.s_x(), frame.s_p());
        let mass0: f64 = values.iter().sum::<f64>() * g.cell();
        self.load(values);
        self.plan.along_v(&mut self.work, false);
        transpose(&self.work, &mut self.spare, nu, nv);
        std::mem::swap(&mut self.work, &mut self.spare);
        // Now rows are k_v, contiguous in u.
        let quad: Vec<f64> = (0..nu).map(|i| sx * sx * g.u(i) * g.u(i) / sp).collect();
        let cubic = kappa * h * h / (3.0 * sp * sp * sp);
        let cu = d * dt * (-2.0 * frame.a).exp();
        let cv = d * dt * (2.0 * frame.a).exp();
        let lines = self.plan.u_lines();
        let ku = &self.ku;
        let kv = &self.kv;
        let kv_odd = &self.kv_odd;
        let u_diffuse = |data: &mut [Complex64], frac: f64| {
            if cu == 0.0 {
                return;
            }
            lines.process(data, false);
            for_rows(data, nu, |_, row| {
                for (z, k) in row.iter_mut().zip(ku) {
                    *z *= (-0.5 * frac * cu * k * k).exp();
                }
            });
            lines.process(data, true);
        };
        let kick_v = |data: &mut [Complex64], delta: f64| {
            for_rows(data, nu, |m, row| {
                let k = kv_odd[m];
                let damp = (-0.5 * cv * kv[m] * kv[m]).exp();
                if delta == 0.0 || k == 0.0 {
                    if damp != 1.0 {
                        row.iter_mut().for_each(|z| *z *= damp);
                    }
                    return;
                }
                let c3 = cubic * k * k * k;
                for (z, q) in row.iter_mut().zip(&quad) {
                    let phase = -delta * (q * k + c3);
                    *z *= Complex64::from_polar(damp, phase);
                }
            });
        };
        let mut drift: f64 = 0.0;
        let n = deltas.len();
        if order == SplittingOrder::Strang {
            u_diffuse(&mut self.work, 0.5);
        }
        for (j, &delta) in deltas.iter().enumerate() {
            kick_v(&mut self.work, delta);
            let frac = match order {
                SplittingOrder::Lie => 1.0,
                SplittingOrder::Strang if j + 1 == n => 0.5,
                SplittingOrder::Strang => 1.0,
            };
            u_diffuse(&mut self.work, frac);
            if every > 0 && (j + 1) % every == 0 {
                let m: f64 = self.work[..nu].iter().map(|z| z.re).sum::<f64>() * g.cell();
                drift = drift.max((m - mass0).abs());
            }
        }
        transpose(&self.work, &mut self.spare, nv, nu);
        std::mem::swap(&mut self.work, &mut self.spare);
        self.plan.along_v(&mut self.work, true);
        self.store(values);
        drift
    }

    /// Share of spectral power beyond 3/4 of Nyquist along `u` and `v`.
    fn spectral_tail(&mut self, values: &[f64]) -> (f64, f64) {
        self.load(values);
        self.plan.full(&mut self.work, false);
        let g = self.grid;
        let lu = 0.75 * std::f64::consts::PI / g.du;
        let lv = 0.75 * std::f64::consts::PI / g.dv;
        let (mut total, mut tu, mut tv) = (0.0, 0.0, 0.0);
        for i in 0..g.nu {
            for j in 0..g.nv {
                let p = self.work[i * g.nv + j].norm_sqr();
                total += p;
                if self.ku[i].abs() > lu {
                    tu += p;
                }
                if self.kv[j].abs() > lv {
                    tv += p;
                }
            }
        }
        if total == 0.0 {
            (0.0, 0.0)
        } else {
            (tu / total, tv / total)
        }
    }
}

fn kick_deltas(schedule: &Schedule, d: f64, substeps_per_unit: usize) -> (Vec<f64>, f64) {
    let [t0, t1, t2, _] = schedule.checkpoints();
    let _ = t0;
    let tau2 = t2 - t1;
    if d == 0.0 {
        return (vec![schedule.chi_integral(1, t1, t2)], tau2);
    }
    let n = ((substeps_per_unit as f64 * tau2).ceil() as usize).max(1);
    let dt = tau2 / n as f64;
    let deltas = (0..n)
        .map(|j| {
            let ta = t1 + j as f64 * dt;
            let tb = if j + 1 == n { t2 } else { t1 + (j + 1) as f64 * dt };
            schedule.chi_integral(1, ta, tb)
        })
        .collect();
    (deltas, dt)
}

fn check_snapshot(f: &PhaseSpaceField, mass0: f64, diag: &mut Diagnostics) -> Result<()> {
    let m = f.mass();
    diag.mass_drift = diag.mass_drift.max((m - mass0).abs());
    if diag.mass_drift > MASS_TOLERANCE {
        return Err(Error::SolverFailure(format!("mass drift {:.3e}", diag.mass_drift)));
    }
    let max = f.values.iter().copied().fold(0.0f64, f64::max);
    if max > 0.0 {
        let rel = f.min_value() / max;
        diag.min_relative = diag.min_relative.min(rel);
        if f.kind == FieldKind::Classical && rel < -NEGATIVITY_TOLERANCE {
            return Err(Error::SolverFailure(format!(
                "classical density negative: min/max = {rel:.3e}"
            )));
        }
    }
    Ok(())
}

/// Runs `field` through the schedule. Returns the final field and the
/// snapshots at the four checkpoints.
pub fn evolve(
    field: &PhaseSpaceField,
    schedule: &Schedule,
    params: &SemiclassicalParams,
    config: &EvolverConfig,
) -> Result<EvolveOutput> {
    config.validate()?;
    let h = params.h();
    if (field.h - h).abs() > 1e-12 * h {
        return Err(Error::InvalidParameter(format!(
            "field built for h = {} but parameters give h = {h}",
            field.h
        )));
    }
    field.grid.check_resolution(h, POINTS_PER_SQRT_H)?;
    let d = params.diffusion();
    let kappa = field.kind.kappa();
    let [t0, t1, t2, t3] = schedule.checkpoints();
    let mass0 = field.mass();
    let mut diag = Diagnostics {
        mass_drift: 0.0,
        min_relative: 0.0,
        edge_mass: [(0.0, 0.0); 4],
        u_wrap_step3: false,
        edge_warning: false,
        spectral_tail: (0.0, 0.0),
        kick_substeps: 0,
    };
    let mut kernel = Kernel::new(field.grid);
    let mut cur = field.clone();
    let mut snapshots = Vec::with_capacity(4);
    let mut record = |f: &PhaseSpaceField, c: usize, diag: &mut Diagnostics| -> Result<()> {
        check_snapshot(f, mass0, diag)?;
        let e = f.edge_mass();
        diag.edge_mass[c] = e;
        if c == 3 {
            diag.u_wrap_step3 = e.0 > EDGE_WARNING;
        } else if e.0.max(e.1) > EDGE_WARNING {
            diag.edge_warning = true;
        }
        let limit = if c == 3 { e.1 } else { e.0.max(e.1) };
        if limit > EDGE_FAILURE {
            return Err(Error::Coverage { mass_outside: limit });
        }
        snapshots.push(f.clone());
        Ok(())
    };
    diag.min_relative = {
        let max = cur.values.iter().copied().fold(0.0f64, f64::max);
        if max > 0.0 {
            cur.min_value() / max
        } else {
            0.0
        }
    };
    record(&cur, 0, &mut diag)?;

    // Step 1: stretch absorbed by the frame.
    if t1 > t0 {
        let a_in = cur.frame.a;
        if d > 0.0 {
            let cu = d * (-2.0 * a_in).exp() * schedule.frame_weight_integral(-1.0, t0, t1)?;
            let cv = d * (2.0 * a_in).exp() * schedule.frame_weight_integral(1.0, t0, t1)?;
            kernel.diffuse(&mut cur.values, cu, cv);
        }
        cur.frame = linear_frame_substep(cur.frame, schedule.chi_integral(0, t0, t1));
    }
    record(&cur, 1, &mut diag)?;

    // Step 2: kick.
    if t2 > t1 {
        let (deltas, dt) = kick_deltas(schedule, d, config.substeps_per_unit);
        diag.kick_substeps = deltas.len();
        if d > 0.0 || deltas.iter().any(|&x| x != 0.0) {
            let drift = kernel.kick(
                &mut cur.values,
                cur.frame,
                h,
                kappa,
                &deltas,
                d,
                dt,
                config.splitting,
                config.diagnostics_every,
            );
            diag.mass_drift = diag.mass_drift.max(drift);
        }
        diag.spectral_tail = kernel.spectral_tail(&cur.values);
        if diag.spectral_tail.0.max(diag.spectral_tail.1) > SPECTRAL_TAIL_TOLERANCE {
            return Err(Error::Resolution(format!(
                "spectral tail after kick ({:.2e}, {:.2e}) exceeds {SPECTRAL_TAIL_TOLERANCE:e}",
                diag.spectral_tail.0, diag.spectral_tail.1
            )));
        }
    }
    record(&cur, 2, &mut diag)?;

    // Step 3: squeeze absorbed by the frame.
    if t3 > t2 {
        let a_in = cur.frame.a - schedule.frame_log_scale(t2);
        if d > 0.0 {
            let cu = d * (-2.0 * a_in).exp() * schedule.frame_weight_integral(-1.0, t2, t3)?;
            let cv = d * (2.0 * a_in).exp() * schedule.frame_weight_integral(1.0, t2, t3)?;
            kernel.diffuse(&mut cur.values, cu, cv);
        }
        cur.frame = linear_frame_substep(cur.frame, -schedule.chi_integral(2, t2, t3));
    }
    record(&cur, 3, &mut diag)?;

    if config.frame_policy == FramePolicy::Fixed {
        for s in snapshots.iter_mut() {
            *s = s.resample(field.frame, field.grid);
        }
    }
    let final_field = snapshots[3].clone();
    Ok(EvolveOutput {
        final_field,
        snapshots,
        diagnostics: diag,
    })
}

/// Exact transport `p -> p + delta x^2` plus, for `kappa = 1`, the quantum
/// third-derivative term, over a kick of integrated strength `delta`.
pub fn cubic_kick_substep(
    field: &PhaseSpaceField,
    delta: f64,
    params: &SemiclassicalParams,
    kappa: f64,
) -> PhaseSpaceField {
    let mut out = field.clone();
    if delta == 0.0 {
        return out;
    }
    let mut k = Kernel::new(field.grid);
    k.kick(
        &mut out.values,
        field.frame,
        params.h(),
        kappa,
        &[delta],
        0.0,
        0.0,
        SplittingOrder::Lie,
        0,
    );
    out
}

/// Diffusion over `dt` with the frame held fixed.
pub fn diffusion_substep(field: &PhaseSpaceField, params: &SemiclassicalParams, dt: f64) -> PhaseSpaceField {
    let d = params.diffusion() * dt;
    let a = field.frame.a;
    diffusion_weighted(field, d * (-2.0 * a).exp(), d * (2.0 * a).exp())
}

/// Adds frame variances `(var_u, var_v)` by Gaussian convolution.
pub fn diffusion_weighted(field: &PhaseSpaceField, var_u: f64, var_v: f64) -> PhaseSpaceField {
    let mut out = field.clone();
    Kernel::new(field.grid).diffuse(&mut out.values, var_u, var_v);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub substeps_per_unit: usize,
    pub l1_difference: f64,
    pub passed: bool,
}

pub const CONVERGENCE_TOLERANCE: f64 = 1e-4;

/// Compares final momentum marginals at `substeps` and twice that.
pub fn convergence_check(
    field: &PhaseSpaceField,
    schedule: &Schedule,
    params: &SemiclassicalParams,
    config: &EvolverConfig,
) -> Result<ConvergenceReport> {
    let coarse = evolve(field, schedule, params, config)?;
    let fine_cfg = config.with_substeps(2 * config.substeps_per_unit);
    let fine = evolve(field, schedule, params, &fine_cfg)?;
    let l1 = l1_distance(
        &coarse.final_field.momentum_marginal(),
        &fine.final_field.momentum_marginal(),
    )?;
    let report = ConvergenceReport {
        substeps_per_unit: config.substeps_per_unit,
        l1_difference: l1,
        passed: l1 < CONVERGENCE_TOLERANCE,
    };
    if !report.passed {
        return Err(Error::SolverFailure(format!(
            "refinement changed the final marginal by {l1:.3e} in L1"
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussianSpec;
    use crate::grid::GridConfig;

    fn gaussian_field(h: f64, cov: [[f64; 2]; 2], kind: FieldKind) -> PhaseSpaceField {
        let g = GaussianSpec::new([0.0, 0.0], cov).unwrap();
        PhaseSpaceField::gaussian(&g, h, &GridConfig::symmetric(256, 16.0), kind, AffineFrame::IDENTITY).unwrap()
    }

    #[test]
    fn zero_durations_are_identity() {
        let p = SemiclassicalParams::from_h(0.05, 1e-3).unwrap();
        let f = PhaseSpaceField::initial_coherent(&p, &GridConfig::default(), FieldKind::QuantumWigner).unwrap();
        let s = Schedule::new(0.0, 0.0, 0.0).unwrap();
        let out = evolve(&f, &s, &p, &EvolverConfig::default()).unwrap();
        assert_eq!(out.final_field, f);
        assert_eq!(out.snapshots.len(), 4);
    }

    #[test]
    fn free_diffusion_adds_dt_to_variances() {
        let h = 0.05;
        let d = 2e-3;
        let p = SemiclassicalParams::from_h(h, d).unwrap();
        let f = gaussian_field(h, [[h, 0.0], [0.0, h]], FieldKind::Classical);
        let s = Schedule::new(0.7, 1.1, 0.9).unwrap().with_couplings([0.0; 3]);
        let out = evolve(&f, &s, &p, &EvolverConfig::default().with_substeps(20)).unwrap();
        let m = out.final_field.moments();
        let t = s.total_time();
        assert!((m.var_x - (h + d * t)).abs() < 1e-8, "{}", m.var_x - h - d * t);
        assert!((m.var_p - (h + d * t)).abs() < 1e-8);
    }

    #[test]
    fn step_one_stretches_variances() {
        let h = 0.05;
        let p = SemiclassicalParams::from_h(h, 0.0).unwrap();
        let f = PhaseSpaceField::initial_coherent(&p, &GridConfig::default(), FieldKind::Classical).unwrap();
        let s = Schedule::new(0.8, 0.0, 0.0).unwrap();
        let m = evolve(&f, &s, &p, &EvolverConfig::default()).unwrap().final_field.moments();
        assert!((m.var_x / (h * 1.6f64.exp()) - 1.0).abs() < 1e-6);
        assert!((m.var_p / (h * (-1.6f64).exp()) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn classical_kick_shifts_columns() {
        let h = 0.05f64;
        let p = SemiclassicalParams::from_h(h, 0.0).unwrap();
        let f = gaussian_field(h, [[h, 0.0], [0.0, h]], FieldKind::Classical);
        let delta = 0.8;
        let out = cubic_kick_substep(&f, delta, &p, 0.0);
        let g = GaussianSpec::coherent(h);
        let mut err: f64 = 0.0;
        for i in 0..f.grid.nu {
            for j in 0..f.grid.nv {
                let (x, pp) = (f.grid.u(i), f.grid.v(j));
                err = err.max((out.at(i, j) - g.density(x, pp - delta * x * x)).abs());
            }
        }
        assert!(err < 1e-10, "{err}");
        assert_eq!(cubic_kick_substep(&f, 0.0, &p, 1.0), f);
    }

    #[test]
    fn diffusion_in_stretched_frame_acts_in_lab() {
        let h = 0.05f64;
        let p = SemiclassicalParams::from_h(h, 3e-3).unwrap();
        let frame = AffineFrame::new(1.0);
        let cov = [[h * 2f64.exp(), 0.0], [0.0, h * (-2f64).exp()]];
        let g = GaussianSpec::new([0.0, 0.0], cov).unwrap();
        let f = PhaseSpaceField::gaussian(&g, h, &GridConfig::symmetric(256, 16.0), FieldKind::Classical, frame).unwrap();
        let out = diffusion_substep(&f, &p, 0.5).moments();
        assert!((out.var_x - cov[0][0] - 1.5e-3).abs() < 1e-10);
        assert!((out.var_p - cov[1][1] - 1.5e-3).abs() < 1e-10);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let h = 0.05;
        let p = SemiclassicalParams::from_h(h, 0.0).unwrap();
        let f = PhaseSpaceField::initial_coherent(&p, &GridConfig::symmetric(64, 16.0), FieldKind::Classical).unwrap();
        let s = Schedule::standard(h).unwrap();
        assert!(matches!(
            evolve(&f, &s, &p, &EvolverConfig::default()),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            convergence_check(&f, &s, &p, &EvolverConfig::default()),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn linear_in_the_density() {
        let h = 0.05;
        let p = SemiclassicalParams::from_h(h, h.powf(4.0 / 3.0)).unwrap();
        let cfg = GridConfig::default();
        let a = PhaseSpaceField::initial_coherent(&p, &cfg, FieldKind::QuantumWigner).unwrap();
        let spec = GaussianSpec::new([0.02, -0.01], [[h, 0.3 * h], [0.3 * h, h]]).unwrap();
        let b = PhaseSpaceField::gaussian(&spec, h, &cfg, FieldKind::QuantumWigner, AffineFrame::IDENTITY).unwrap();
        let alpha = 0.3;
        let mut mix = a.clone();
        for (m, (x, y)) in mix.values.iter_mut().zip(a.values.iter().zip(&b.values)) {
            *m = alpha * x + (1.0 - alpha) * y;
        }
        let s = Schedule::standard(h).unwrap();
        let c = EvolverConfig::default().with_substeps(40);
        let ea = evolve(&a, &s, &p, &c).unwrap().final_field;
        let eb = evolve(&b, &s, &p, &c).unwrap().final_field;
        let em = evolve(&mix, &s, &p, &c).unwrap().final_field;
        let peak = em.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..em.values.len() {
            let want = alpha * ea.values[k] + (1.0 - alpha) * eb.values[k];
            assert!((em.values[k] - want).abs() < 1e-10 * peak);
        }
    }
}
