//! Position-basis density-matrix solver for the Lindblad equation with
//! operators `sqrt(D/hbar) x` and `sqrt(D/hbar) p`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldKind, PhaseSpaceField};
use crate::fourier::{wavenumbers, Plan2};
use crate::frame::AffineFrame;
use crate::grid::Grid;
use crate::momentum::MomentumDistribution;
use crate::params::SemiclassicalParams;
use crate::schedule::Schedule;

pub const TRACE_TOLERANCE: f64 = 1e-4;
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;

/// `rho_lab(x, x') = e^{-a} rho(u, u')` with `x = e^a u`; row-major, `u` slow.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixField {
    pub frame: AffineFrame,
    pub h: f64,
    pub n: usize,
    pub u0: f64,
    pub du: f64,
    pub values: Vec<Complex64>,
}

impl DensityMatrixField {
    /// Pure coherent state on `n` points over `|u| < half_width sqrt(h)`.
    pub fn coherent(h: f64, n: usize, half_width: f64) -> Result<Self> {
        let psi = super::WavefunctionField::coherent(h, n, half_width)?;
        Ok(Self::pure(&psi))
    }

    pub fn pure(psi: &super::WavefunctionField) -> Self {
        let n = psi.values.len();
        let mut values = vec![Complex64::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = psi.values[i] * psi.values[j].conj();
            }
        }
        Self {
            frame: psi.frame,
            h: psi.h,
            n,
            u0: psi.u0,
            du: psi.du,
            values,
        }
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.du
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.values[i * self.n + i].re).sum::<f64>() * self.du
    }

    pub fn purity(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.du * self.du
    }

    /// `max |rho(u, u') - conj(rho(u', u))|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.values[i * n + j] - self.values[j * n + i].conj()).norm());
            }
        }
        worst
    }

    /// `R(d) = sum_j rho(j + d, j) du` for offsets `d` in `[-n/2, n/2)`,
    /// periodic in the centre coordinate.
    fn offset_sums(&self) -> Vec<(i64, Complex64)> {
        let n = self.n as i64;
        (-n / 2..n / 2)
            .map(|d| {
                let mut acc = Complex64::default();
                for j in 0..n {
                    let i = (j + d).rem_euclid(n);
                    acc += self.values[(i * n + j) as usize];
                }
                (d, acc * self.du)
            })
            .collect()
    }

    /// Lab momentum density `<p| rho |p>`.
    pub fn momentum_distribution(&self, p0: f64, dp: f64, count: usize) -> MomentumDistribution {
        let hbar = 2.0 * self.h;
        let s = self.frame.s_x();
        let r = self.offset_sums();
        MomentumDistribution::sample(
            |p| {
                let w = p * s * self.du / hbar;
                let acc: f64 = r
                    .iter()
                    .map(|&(d, z)| (z * Complex64::from_polar(1.0, -w * d as f64)).re)
                    .sum();
                acc * s * self.du / (2.0 * PI * hbar)
            },
            p0,
            dp,
            count,
        )
    }

    /// Lab position density on the nodes.
    pub fn position_distribution(&self) -> MomentumDistribution {
        let s = self.frame.s_x();
        MomentumDistribution {
            p0: self.u0 * s,
            dp: self.du * s,
            values: (0..self.n).map(|i| self.values[i * self.n + i].re / s).collect(),
        }
    }

    /// Wigner function on `grid` (frame coordinates, same `u` nodes as this
    /// matrix), by direct summation over non-wrapping even offsets.
    pub fn wigner(&self, grid: Grid) -> Result<PhaseSpaceField> {
        if grid.nu != self.n || (grid.du - self.du).abs() > 1e-12 * self.du || (grid.u0 - self.u0).abs() > 1e-9 * self.du
        {
            return Err(Error::GridMismatch("Wigner grid must share the u nodes of the density matrix".into()));
        }
        let hbar = 2.0 * self.h;
        let n = self.n as i64;
        let mut values = vec![0.0; grid.len()];
        for i in 0..n {
            // Offsets that wrap would alias the centre `u_i` onto `u_{i + n/2}`.
            let reach = i.min(n - 1 - i);
            let col: Vec<(i64, Complex64)> = (-reach..=reach)
                .map(|m| (m, self.values[((i + m) * n + (i - m)) as usize]))
                .collect();
            for j in 0..grid.nv {
                let w = grid.v(j) * 2.0 * self.du / hbar;
                let acc: f64 = col
                    .iter()
                    .map(|&(m, z)| (z * Complex64::from_polar(1.0, -w * m as f64)).re)
                    .sum();
                values[i as usize * grid.nv + j] = acc * 2.0 * self.du / (2.0 * PI * hbar);
            }
        }
        Ok(PhaseSpaceField {
            kind: FieldKind::QuantumWigner,
            frame: self.frame,
            grid,
            h: self.h,
            values,
        })
    }
}

struct Propagator {
    n: usize,
    plan: Plan2,
    k: Vec<f64>,
    /// `(u_i - u_j)^2`
    sep2: Vec<f64>,
    /// `u_i^3 - u_j^3`
    cube: Vec<f64>,
}

impl Propagator {
    fn new(rho: &DensityMatrixField) -> Self {
        let n = rho.n;
        let mut sep2 = vec![0.0; n * n];
        let mut cube = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (rho.u(i), rho.u(j));
                sep2[i * n + j] = (a - b) * (a - b);
                cube[i * n + j] = a * a * a - b * b * b;
            }
        }
        Self {
            n,
            plan: Plan2::new(n, n),
            k: wavenumbers(n, rho.du),
            sep2,
            cube,
        }
    }

    /// Multiplies `rho(k, k')` by `exp(-c (k - k')^2 / 2)`.
    fn p_decohere(&mut self, rho: &mut [Complex64], c: f64) {
        if c == 0.0 {
            return;
        }
        // e^{-iku} along u, e^{+ik'u'} along u'.
        self.plan.along_u(rho, false);
        self.plan.along_v(rho, true);
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let dk = self.k[i] - self.k[j];
                rho[i * n + j] *= (-0.5 * c * dk * dk).exp();
            }
        }
        self.plan.along_v(rho, false);
        self.plan.along_u(rho, true);
    }

    /// Cubic phase `exp(i phase (u^3 - u'^3))` and position damping
    /// `exp(-damp (u - u')^2)`.
    fn position_step(&self, rho: &mut [Complex64], phase: f64, damp: f64) {
        for ((z, &s2), &c3) in rho.iter_mut().zip(&self.sep2).zip(&self.cube) {
            *z *= Complex64::from_polar((-damp * s2).exp(), phase * c3);
        }
    }
}

fn check(rho: &DensityMatrixField) -> Result<()> {
    let t = rho.trace();
    if (t - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::SolverFailure(format!("density-matrix trace drifted to {t}")));
    }
    let peak = rho.values.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let hd = rho.hermiticity_defect();
    if hd > HERMITICITY_TOLERANCE * peak.max(1.0) {
        return Err(Error::SolverFailure(format!("hermiticity defect {hd:.3e}")));
    }
    Ok(())
}

/// States at `t0..t3`. Steps 1 and 3 act through the frame plus exact
/// decoherence factors; the kick is Strang-split with `steps_per_unit`
/// substeps per unit time.
pub fn lindblad_dm_evolve(
    rho0: &DensityMatrixField,
    schedule: &Schedule,
    params: &SemiclassicalParams,
    steps_per_unit: usize,
) -> Result<Vec<DensityMatrixField>> {
    if (rho0.h - params.h()).abs() > 1e-12 * params.h() {
        return Err(Error::InvalidParameter("density matrix built for a different h".into()));
    }
    if steps_per_unit == 0 {
        return Err(Error::InvalidParameter("steps per unit time must be at least 1".into()));
    }
    let d = params.diffusion();
    let hbar = params.hbar();
    let [t0, t1, t2, t3] = schedule.checkpoints();
    let mut prop = Propagator::new(rho0);
    let mut rho = rho0.clone();
    let mut out = vec![rho.clone()];

    // Lindblad position term: exp(-(D / 2 hbar^2) (x - x')^2 dt) with x = e^a u;
    // momentum term: exp(-(D/2) (k - k')^2 dt e^{-2a}) in frame wavenumbers.
    let linear = |rho: &mut DensityMatrixField, prop: &mut Propagator, ta: f64, tb: f64, sign: f64| -> Result<()> {
        if tb <= ta {
            return Ok(());
        }
        if d > 0.0 {
            let a0 = rho.frame.a - schedule.frame_log_scale(ta);
            let wx = (2.0 * a0).exp() * schedule.frame_weight_integral(1.0, ta, tb)?;
            let wp = (-2.0 * a0).exp() * schedule.frame_weight_integral(-1.0, ta, tb)?;
            prop.position_step(&mut rho.values, 0.0, d * wx / (2.0 * hbar * hbar));
            prop.p_decohere(&mut rho.values, d * wp);
        }
        let step = if sign > 0.0 { 0 } else { 2 };
        rho.frame = rho.frame.compose(AffineFrame::new(sign * schedule.chi_integral(step, ta, tb)));
        Ok(())
    };

    linear(&mut rho, &mut prop, t0, t1, 1.0)?;
    check(&rho)?;
    out.push(rho.clone());

    if t2 > t1 {
        let s = rho.frame.s_x();
        let n = ((steps_per_unit as f64 * (t2 - t1)).ceil() as usize).max(1);
        let dt = (t2 - t1) / n as f64;
        let damp = d * s * s * dt / (2.0 * hbar * hbar);
        let cp = d * dt / (s * s);
        prop.p_decohere(&mut rho.values, 0.5 * cp);
        for j in 0..n {
            let ta = t1 + j as f64 * dt;
            let tb = if j + 1 == n { t2 } else { ta + dt };
            let delta = schedule.chi_integral(1, ta, tb);
            prop.position_step(&mut rho.values, delta * s * s * s / (3.0 * hbar), damp);
            prop.p_decohere(&mut rho.values, if j + 1 == n { 0.5 * cp } else { cp });
        }
    }
    check(&rho)?;
    out.push(rho.clone());

    linear(&mut rho, &mut prop, t2, t3, -1.0)?;
    check(&rho)?;
    out.push(rho);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_evolution_stays_pure() {
        let h = 0.05;
        let s = Schedule::standard(h).unwrap();
        let p = SemiclassicalParams::from_h(h, 0.0).unwrap();
        let rho = DensityMatrixField::coherent(h, 128, 16.0).unwrap();
        let out = lindblad_dm_evolve(&rho, &s, &p, 50).unwrap();
        for r in &out {
            assert!((r.purity() - 1.0).abs() < 1e-6);
            assert!((r.trace() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn diffusion_lowers_purity() {
        let h = 0.05f64;
        let s = Schedule::standard(h).unwrap();
        let p = SemiclassicalParams::from_h(h, h.powf(4.0 / 3.0)).unwrap();
        let rho = DensityMatrixField::coherent(h, 128, 16.0).unwrap();
        let out = lindblad_dm_evolve(&rho, &s, &p, 50).unwrap();
        for w in out.windows(2) {
            assert!(w[1].purity() < w[0].purity());
        }
    }

    #[test]
    fn free_diffusion_grows_variances() {
        let h = 0.05f64;
        let d = 2e-3;
        let s = Schedule::new(0.5, 0.8, 0.6).unwrap().with_couplings([0.0; 3]);
        let p = SemiclassicalParams::from_h(h, d).unwrap();
        let rho = DensityMatrixField::coherent(h, 128, 16.0).unwrap();
        let out = lindblad_dm_evolve(&rho, &s, &p, 20).unwrap();
        let t = s.total_time();
        let x = out[3].position_distribution();
        assert!((x.central_moment(2) - h - d * t).abs() < 1e-9);
        let q = out[3].momentum_distribution(-2.0, 0.01, 400);
        assert!((q.central_moment(2) - h - d * t).abs() < 1e-8);
    }
}
