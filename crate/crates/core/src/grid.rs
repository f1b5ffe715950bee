//! Periodic phase-space grids in co-moving frame coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SemiclassicalParams;
use crate::schedule::Schedule;

/// Grid layout with extents in units of `sqrt(h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub nu: usize,
    pub nv: usize,
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Default for GridConfig {
    /// 512 x 512 on `u in [-16, 16]`, `v in [-12, 52]`. The `v` window is
    /// shifted right because the kick pushes momentum up by `x^2`; at the
    /// standard durations the final frame momentum in these units equals the
    /// lab momentum, whose right tail decays like `exp(-p/2)`.
    fn default() -> Self {
        Self {
            nu: 512,
            nv: 512,
            u_min: -16.0,
            u_max: 16.0,
            v_min: -12.0,
            v_max: 52.0,
        }
    }
}

impl GridConfig {
    pub fn symmetric(n: usize, half_width: f64) -> Self {
        Self {
            nu: n,
            nv: n,
            u_min: -half_width,
            u_max: half_width,
            v_min: -half_width,
            v_max: half_width,
        }
    }

    pub fn du(&self) -> f64 {
        (self.u_max - self.u_min) / self.nu as f64
    }

    pub fn dv(&self) -> f64 {
        (self.v_max - self.v_min) / self.nv as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 2 || self.nv < 2 {
            return Err(Error::InvalidParameter("grid needs at least 2 points per axis".into()));
        }
        if !(self.u_max > self.u_min && self.v_max > self.v_min) {
            return Err(Error::InvalidParameter("grid extents must be increasing".into()));
        }
        Ok(())
    }

    /// Bytes needed by an evolution on this grid: the real field, two complex
    /// work arrays and four checkpoint snapshots.
    pub fn memory_estimate(&self) -> usize {
        self.nu * self.nv * (8 + 2 * 16 + 4 * 8)
    }

    pub fn build(&self, h: f64) -> Result<Grid> {
        self.validate()?;
        let s = h.sqrt();
        Ok(Grid {
            nu: self.nu,
            nv: self.nv,
            u0: self.u_min * s,
            du: self.du() * s,
            v0: self.v_min * s,
            dv: self.dv() * s,
        })
    }
}

/// Absolute grid: `u_i = u0 + i du`, `v_j = v0 + j dv`, periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
    pub u0: f64,
    pub du: f64,
    pub v0: f64,
    pub dv: f64,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.du
    }

    pub fn v(&self, j: usize) -> f64 {
        self.v0 + j as f64 * self.dv
    }

    pub fn cell(&self) -> f64 {
        self.du * self.dv
    }

    pub fn u_len(&self) -> f64 {
        self.nu as f64 * self.du
    }

    pub fn v_len(&self) -> f64 {
        self.nv as f64 * self.dv
    }

    pub fn u_max(&self) -> f64 {
        self.u0 + self.u_len()
    }

    pub fn v_max(&self) -> f64 {
        self.v0 + self.v_len()
    }

    /// Fails unless both spacings resolve `sqrt(h)` with at least
    /// `points_per_sqrt_h` points.
    pub fn check_resolution(&self, h: f64, points_per_sqrt_h: f64) -> Result<()> {
        let lim = h.sqrt() / points_per_sqrt_h;
        if self.du > lim * (1.0 + 1e-12) || self.dv > lim * (1.0 + 1e-12) {
            return Err(Error::Resolution(format!(
                "grid spacing ({:.3e}, {:.3e}) coarser than sqrt(h)/{points_per_sqrt_h} = {lim:.3e}",
                self.du, self.dv
            )));
        }
        Ok(())
    }
}

/// Predicted spreads (in units of `sqrt(h)`) of the evolved state, used to
/// size grids for a given diffusion rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadForecast {
    /// Standard deviation of `u` entering step 3.
    pub sigma_u: f64,
    /// Standard deviation of `v` from diffusion alone over all steps.
    pub sigma_v: f64,
    /// Kick coefficient: `v -> v + kick * u^2` in these units.
    pub kick: f64,
}

pub fn forecast_spread(schedule: &Schedule, params: &SemiclassicalParams) -> Result<SpreadForecast> {
    let h = params.h();
    let dh = params.diffusion() / h;
    let t = schedule.checkpoints();
    let a1 = schedule.frame_log_scale(t[1]);
    let tau2 = schedule.tau()[1];
    let i1m = schedule.frame_weight_integral(-1.0, t[0], t[1])?;
    let i1p = schedule.frame_weight_integral(1.0, t[0], t[1])?;
    let i3p = schedule.frame_weight_integral(1.0, t[2], t[3])?;
    let var_u = 1.0 + dh * (i1m + (-2.0 * a1).exp() * tau2);
    let var_v = 1.0 + dh * (i1p + (2.0 * a1).exp() * tau2 + i3p);
    let kick = schedule.chi_integral(1, t[1], t[2]).abs() * (3.0 * a1).exp() * h.sqrt();
    Ok(SpreadForecast {
        sigma_u: var_u.sqrt(),
        sigma_v: var_v.sqrt(),
        kick,
    })
}

fn round_up(n: usize, m: usize) -> usize {
    n.div_ceil(m) * m
}

/// Widens `base` (keeping its spacings) so the state predicted for
/// `(schedule, params)` stays inside the window. Step-3 growth in `u` is not
/// included: it cannot reach the momentum marginal, see
/// [`crate::evolver::Diagnostics::u_wrap_step3`].
pub fn plan_grid(
    base: &GridConfig,
    schedule: &Schedule,
    params: &SemiclassicalParams,
    memory_budget: usize,
) -> Result<GridConfig> {
    base.validate()?;
    let f = forecast_spread(schedule, params)?;
    let du = base.du();
    let dv = base.dv();
    let half_u = (8.0 * f.sigma_u).max(base.u_max).max(-base.u_min);
    let tail = 44.0 * f.sigma_u * f.sigma_u;
    let v_lo = (-8.0 * f.sigma_v).min(base.v_min);
    let v_hi = (f.kick * tail + 8.0 * f.sigma_v).max(base.v_max);
    let nu = round_up((2.0 * half_u / du).ceil() as usize, 64).max(base.nu);
    let nv = round_up(((v_hi - v_lo) / dv).ceil() as usize, 64).max(base.nv);
    let cfg = if nu == base.nu && nv == base.nv {
        *base
    } else {
        let wu = nu as f64 * du;
        let wv = nv as f64 * dv;
        let u_min = if nu == base.nu { base.u_min } else { -0.5 * wu };
        let v_min = if nv == base.nv { base.v_min } else { v_lo };
        GridConfig {
            nu,
            nv,
            u_min,
            u_max: u_min + wu,
            v_min,
            v_max: v_min + wv,
        }
    };
    let need = cfg.memory_estimate();
    if need > memory_budget {
        return Err(Error::Planning(format!(
            "grid {}x{} needs ~{} MiB, budget {} MiB",
            cfg.nu,
            cfg.nv,
            need >> 20,
            memory_budget >> 20
        )));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spacings() {
        let g = GridConfig::default();
        assert_eq!(g.du(), 1.0 / 16.0);
        assert_eq!(g.dv(), 1.0 / 8.0);
        let grid = g.build(0.04).unwrap();
        assert!((grid.du - 0.2 / 16.0).abs() < 1e-15);
        grid.check_resolution(0.04, 8.0).unwrap();
        assert!(GridConfig::symmetric(64, 16.0)
            .build(0.04)
            .unwrap()
            .check_resolution(0.04, 8.0)
            .is_err());
    }

    #[test]
    fn planner_keeps_default_at_zero_diffusion() {
        let h = 0.05;
        let s = Schedule::standard(h).unwrap();
        let p = SemiclassicalParams::from_h(h, 0.0).unwrap();
        let f = forecast_spread(&s, &p).unwrap();
        assert!((f.kick - 1.0).abs() < 1e-12);
        let g = plan_grid(&GridConfig::default(), &s, &p, 1 << 31).unwrap();
        assert_eq!(g, GridConfig::default());
    }

    #[test]
    fn planner_widens_for_strong_diffusion() {
        let h: f64 = 0.05;
        let s = Schedule::standard(h).unwrap();
        let p = SemiclassicalParams::from_h(h, 10.0 * h.powf(4.0 / 3.0)).unwrap();
        let g = plan_grid(&GridConfig::default(), &s, &p, 1 << 31).unwrap();
        assert!(g.nv > 512 && g.v_min < -12.0);
        assert_eq!(g.dv(), 1.0 / 8.0);
        assert!(matches!(
            plan_grid(&GridConfig::default(), &s, &p, 1 << 20),
            Err(Error::Planning(_))
        ));
    }
}
