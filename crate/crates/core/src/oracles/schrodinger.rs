//! Closed pure-state evolution: the stretch and squeeze are exact dilations,
//! the kick an exact cubic phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::AffineFrame;
use crate::momentum::MomentumDistribution;
use crate::schedule::Schedule;

/// `psi_lab(x) = e^{-a/2} phi(x e^{-a})` with `phi` sampled at `u_i = u0 + i du`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionField {
    pub frame: AffineFrame,
    pub h: f64,
    pub u0: f64,
    pub du: f64,
    pub values: Vec<Complex64>,
}

impl WavefunctionField {
    /// Coherent state on `n` points over `|u| < half_width sqrt(h)`.
    pub fn coherent(h: f64, n: usize, half_width: f64) -> Result<Self> {
        if !(h > 0.0) || n < 2 || !(half_width > 0.0) {
            return Err(Error::InvalidParameter("coherent wavefunction needs h > 0, n >= 2, width > 0".into()));
        }
        let s = h.sqrt();
        let u0 = -half_width * s;
        let du = 2.0 * half_width * s / n as f64;
        let norm = (2.0 * PI * h).powf(-0.25);
        let values = (0..n)
            .map(|i| {
                let u = u0 + i as f64 * du;
                Complex64::new(norm * (-u * u / (4.0 * h)).exp(), 0.0)
            })
            .collect();
        Ok(Self {
            frame: AffineFrame::IDENTITY,
            h,
            u0,
            du,
            values,
        })
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.du
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.du
    }

    /// Lab-frame `|psi(x)|^2` at the nodes, as `(x_i, density)`.
    pub fn position_density(&self) -> MomentumDistribution {
        let s = self.frame.s_x();
        MomentumDistribution {
            p0: self.u0 * s,
            dp: self.du * s,
            values: self.values.iter().map(|z| z.norm_sqr() / s).collect(),
        }
    }

    /// `|psi_hat(p)|^2` with `psi_hat(p) = (2 pi hbar)^{-1/2} int e^{-ipx/hbar} psi(x) dx`,
    /// by direct summation.
    pub fn momentum_density(&self, p: f64) -> f64 {
        let hbar = 2.0 * self.h;
        let s = self.frame.s_x();
        let w = p * s / hbar;
        let (sn, cs) = (w * self.du).sin_cos();
        let step = Complex64::new(cs, -sn);
        let mut ph = Complex64::from_polar(1.0, -w * self.u0);
        let mut acc = Complex64::default();
        for z in &self.values {
            acc += z * ph;
            ph *= step;
            // Renormalise the running phase to stop drift.
            ph /= ph.norm();
        }
        acc.norm_sqr() * self.du * self.du * s / (2.0 * PI * hbar)
    }

    pub fn momentum_distribution(&self, p0: f64, dp: f64, n: usize) -> MomentumDistribution {
        MomentumDistribution::sample(|p| self.momentum_density(p), p0, dp, n)
    }

    /// Multiplies by `exp(i delta x^3 / (3 hbar))`. Fails when the phase
    /// advances by more than `pi/4` per sample at the grid edge.
    pub fn cubic_phase(&mut self, delta: f64) -> Result<()> {
        let hbar = 2.0 * self.h;
        let s = self.frame.s_x();
        let edge = self.u0.abs().max((self.u0 + self.values.len() as f64 * self.du).abs());
        let slope = delta.abs() * s * s * s * edge * edge / hbar;
        if slope * self.du >= PI / 4.0 {
            return Err(Error::Resolution(format!(
                "cubic phase advances {:.3} rad per sample at the edge (limit pi/4)",
                slope * self.du
            )));
        }
        for i in 0..self.values.len() {
            let x = s * self.u(i);
            self.values[i] *= Complex64::from_polar(1.0, delta * x * x * x / (3.0 * hbar));
        }
        Ok(())
    }
}

/// States at `t0..t3` of the closed evolution.
pub fn schrodinger_closed(psi0: &WavefunctionField, schedule: &Schedule, h: f64) -> Result<Vec<WavefunctionField>> {
    if (psi0.h - h).abs() > 1e-12 * h {
        return Err(Error::InvalidParameter("wavefunction built for a different h".into()));
    }
    let [t0, t1, t2, t3] = schedule.checkpoints();
    let mut out = Vec::with_capacity(4);
    let mut psi = psi0.clone();
    out.push(psi.clone());
    psi.frame = psi.frame.compose(AffineFrame::new(schedule.chi_integral(0, t0, t1)));
    out.push(psi.clone());
    psi.cubic_phase(schedule.chi_integral(1, t1, t2))?;
    out.push(psi.clone());
    psi.frame = psi.frame.compose(AffineFrame::new(-schedule.chi_integral(2, t2, t3)));
    out.push(psi);
    Ok(out)
}
