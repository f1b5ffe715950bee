//! Phase-space densities (Wigner or classical) on frame grids.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::trig_interpolate;
use crate::frame::AffineFrame;
use crate::grid::{Grid, GridConfig};
use crate::moments::MomentRecord;
use crate::momentum::MomentumDistribution;
use crate::params::SemiclassicalParams;
use crate::specialfn::erf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    QuantumWigner,
    Classical,
}

impl FieldKind {
    /// Coefficient of the third-order Moyal term.
    pub fn kappa(self) -> f64 {
        match self {
            FieldKind::QuantumWigner => 1.0,
            FieldKind::Classical => 0.0,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            FieldKind::QuantumWigner => 0,
            FieldKind::Classical => 1,
        }
    }

    pub fn from_code(c: u8) -> Result<Self> {
        match c {
            0 => Ok(FieldKind::QuantumWigner),
            1 => Ok(FieldKind::Classical),
            _ => Err(Error::Format(format!("unknown field kind code {c}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::QuantumWigner => "quantum",
            FieldKind::Classical => "classical",
        }
    }
}

/// Bivariate normal in lab coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl GaussianSpec {
    pub fn new(mean: [f64; 2], cov: [[f64; 2]; 2]) -> Result<Self> {
        let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
        if !(cov[0][0] > 0.0 && det > 0.0) || (cov[0][1] - cov[1][0]).abs() > 1e-15 * cov[0][0].abs() {
            return Err(Error::InvalidParameter("covariance must be symmetric positive definite".into()));
        }
        Ok(Self { mean, cov })
    }

    /// Coherent state at the origin: `Sigma = h I`.
    pub fn coherent(h: f64) -> Self {
        Self {
            mean: [0.0, 0.0],
            cov: [[h, 0.0], [0.0, h]],
        }
    }

    pub fn det(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[1][0]
    }

    /// Minimum-uncertainty (pure) state: `det Sigma = h^2`.
    pub fn is_pure(&self, h: f64) -> bool {
        (self.det() - h * h).abs() <= 1e-12 * h * h
    }

    pub fn density(&self, x: f64, p: f64) -> f64 {
        let det = self.det();
        let dx = x - self.mean[0];
        let dp = p - self.mean[1];
        let q = (self.cov[1][1] * dx * dx - 2.0 * self.cov[0][1] * dx * dp + self.cov[0][0] * dp * dp) / det;
        (-0.5 * q).exp() / (2.0 * PI * det.sqrt())
    }
}

/// `G_{sigma_x}(x) G_{sigma_p}(p - r x^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalGaussianSpec {
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub r: f64,
}

impl ConditionalGaussianSpec {
    pub fn new(sigma_x: f64, sigma_p: f64, r: f64) -> Result<Self> {
        if !(sigma_x > 0.0 && sigma_p > 0.0 && r >= 0.0) {
            return Err(Error::InvalidParameter("need sigma_x, sigma_p > 0 and r >= 0".into()));
        }
        Ok(Self { sigma_x, sigma_p, r })
    }

    /// Dimensionless curvature `b = r sigma_x^2 / sigma_p`.
    pub fn b(&self) -> f64 {
        self.r * self.sigma_x * self.sigma_x / self.sigma_p
    }

    pub fn density(&self, x: f64, p: f64) -> f64 {
        let g = |y: f64, s: f64| (-0.5 * y * y / (s * s)).exp() / (s * (2.0 * PI).sqrt());
        g(x, self.sigma_x) * g(p - self.r * x * x, self.sigma_p)
    }
}

/// Density on a frame grid; row-major with `u` as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceField {
    pub kind: FieldKind,
    pub frame: AffineFrame,
    pub grid: Grid,
    pub h: f64,
    pub values: Vec<f64>,
}

impl PhaseSpaceField {
    /// Samples a lab-coordinate density `f(x, p)` on the frame grid.
    pub fn from_lab_fn<F: Fn(f64, f64) -> f64>(
        kind: FieldKind,
        frame: AffineFrame,
        grid: Grid,
        h: f64,
        f: F,
    ) -> Self {
        let mut values = vec![0.0; grid.len()];
        for i in 0..grid.nu {
            let row = &mut values[i * grid.nv..(i + 1) * grid.nv];
            for (j, v) in row.iter_mut().enumerate() {
                let (x, p) = frame.to_lab(grid.u(i), grid.v(j));
                *v = f(x, p);
            }
        }
        Self { kind, frame, grid, h, values }
    }

    /// Coherent state `(1/2 pi h) exp(-(x^2 + p^2) / 2h)` in the identity frame.
    pub fn initial_coherent(params: &SemiclassicalParams, config: &GridConfig, kind: FieldKind) -> Result<Self> {
        let h = params.h();
        let grid = config.build(h)?;
        let s = (2.0 * h).sqrt();
        let inside = |a: f64, b: f64| 0.5 * (erf(b / s) - erf(a / s));
        let outside = 1.0 - inside(grid.u0, grid.u_max()) * inside(grid.v0, grid.v_max());
        if outside > 1e-8 {
            return Err(Error::Coverage { mass_outside: outside });
        }
        let g = GaussianSpec::coherent(h);
        Ok(Self::from_lab_fn(kind, AffineFrame::IDENTITY, grid, h, |x, p| g.density(x, p)))
    }

    pub fn gaussian(
        spec: &GaussianSpec,
        h: f64,
        config: &GridConfig,
        kind: FieldKind,
        frame: AffineFrame,
    ) -> Result<Self> {
        let grid = config.build(h)?;
        Ok(Self::from_lab_fn(kind, frame, grid, h, |x, p| spec.density(x, p)))
    }

    pub fn conditional_gaussian(
        spec: &ConditionalGaussianSpec,
        h: f64,
        config: &GridConfig,
        kind: FieldKind,
        frame: AffineFrame,
    ) -> Result<Self> {
        let grid = config.build(h)?;
        Ok(Self::from_lab_fn(kind, frame, grid, h, |x, p| spec.density(x, p)))
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.nv + j]
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Density of lab `p = s_p v`.
    pub fn momentum_marginal(&self) -> MomentumDistribution {
        let g = &self.grid;
        let mut acc = vec![0.0; g.nv];
        for row in self.values.chunks_exact(g.nv) {
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v;
            }
        }
        let sp = self.frame.s_p();
        let scale = g.du / sp;
        MomentumDistribution {
            p0: g.v0 * sp,
            dp: g.dv * sp,
            values: acc.into_iter().map(|a| a * scale).collect(),
        }
    }

    /// Density of lab `x = s_x u`.
    pub fn position_marginal(&self) -> MomentumDistribution {
        let g = &self.grid;
        let sx = self.frame.s_x();
        let scale = g.dv / sx;
        MomentumDistribution {
            p0: g.u0 * sx,
            dp: g.du * sx,
            values: self
                .values
                .chunks_exact(g.nv)
                .map(|row| row.iter().sum::<f64>() * scale)
                .collect(),
        }
    }

    /// Largest share of the mass in the outer `1/32` band along each axis,
    /// as `(u_band, v_band)`.
    pub fn edge_mass(&self) -> (f64, f64) {
        let total: f64 = self.values.iter().map(|v| v.abs()).sum();
        let g = &self.grid;
        let bu = (g.nu / 32).max(1);
        let bv = (g.nv / 32).max(1);
        let mut eu = 0.0;
        let mut ev = 0.0;
        for i in 0..g.nu {
            let row = &self.values[i * g.nv..(i + 1) * g.nv];
            if i < bu || i >= g.nu - bu {
                eu += row.iter().map(|v| v.abs()).sum::<f64>();
            }
            ev += row[..bv].iter().chain(&row[g.nv - bv..]).map(|v| v.abs()).sum::<f64>();
        }
        if total == 0.0 {
            return (0.0, 0.0);
        }
        (eu / total, ev / total)
    }

    pub fn moments(&self) -> MomentRecord {
        MomentRecord::from_marginals(&self.position_marginal(), &self.momentum_marginal())
    }

    /// Band-limited resampling onto `grid` in `frame`. Target points outside
    /// the source window are set to zero.
    pub fn resample(&self, frame: AffineFrame, grid: Grid) -> Self {
        let src = &self.grid;
        // Source-frame coordinates of the target nodes.
        let ratio_u = frame.s_x() / self.frame.s_x();
        let ratio_v = frame.s_p() / self.frame.s_p();
        let tu: Vec<f64> = (0..grid.nu).map(|i| grid.u(i) * ratio_u).collect();
        let tv: Vec<f64> = (0..grid.nv).map(|j| grid.v(j) * ratio_v).collect();
        let inside_u = |u: f64| u >= src.u0 && u <= src.u_max() - src.du;
        let inside_v = |v: f64| v >= src.v0 && v <= src.v_max() - src.dv;
        // Along v for each source row.
        let mut stage = vec![0.0; src.nu * grid.nv];
        for i in 0..src.nu {
            let row = &self.values[i * src.nv..(i + 1) * src.nv];
            let r = trig_interpolate(row, src.v0, src.dv, &tv);
            stage[i * grid.nv..(i + 1) * grid.nv].copy_from_slice(&r);
        }
        let mut out = vec![0.0; grid.len()];
        let mut col = vec![0.0; src.nu];
        for j in 0..grid.nv {
            if !inside_v(tv[j]) {
                continue;
            }
            for i in 0..src.nu {
                col[i] = stage[i * grid.nv + j];
            }
            let r = trig_interpolate(&col, src.u0, src.du, &tu);
            for (i, val) in r.into_iter().enumerate() {
                if inside_u(tu[i]) {
                    out[i * grid.nv + j] = val;
                }
            }
        }
        Self {
            kind: self.kind,
            frame,
            grid,
            h: self.h,
            values: out,
        }
    }
}
