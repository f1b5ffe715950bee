//! One-dimensional distributions on uniform grids and observables on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::trig_interpolate;

/// Density sampled at `p_j = p0 + j dp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumDistribution {
    pub p0: f64,
    pub dp: f64,
    pub values: Vec<f64>,
}

/// Smooth bounded test function on momentum space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObservableSpec {
    /// `p^n exp(-p^2)`
    PowerGaussian(u32),
    /// `1`
    Unit,
}

impl ObservableSpec {
    pub fn g0() -> Self {
        ObservableSpec::PowerGaussian(0)
    }

    pub fn eval(&self, p: f64) -> f64 {
        match *self {
            ObservableSpec::PowerGaussian(n) => p.powi(n as i32) * (-p * p).exp(),
            ObservableSpec::Unit => 1.0,
        }
    }

    /// `sup |g|`: `(n / 2e)^{n/2}` for `p^n exp(-p^2)`.
    pub fn sup_norm(&self) -> f64 {
        match *self {
            ObservableSpec::PowerGaussian(0) | ObservableSpec::Unit => 1.0,
            ObservableSpec::PowerGaussian(n) => {
                let n = n as f64;
                (n / (2.0 * std::f64::consts::E)).powf(0.5 * n)
            }
        }
    }
}

impl MomentumDistribution {
    pub fn new(p0: f64, dp: f64, values: Vec<f64>) -> Result<Self> {
        if !(dp > 0.0) || values.is_empty() {
            return Err(Error::InvalidParameter("distribution needs dp > 0 and samples".into()));
        }
        Ok(Self { p0, dp, values })
    }

    /// Samples `f` on `n` points starting at `p0`.
    pub fn sample<F: FnMut(f64) -> f64>(mut f: F, p0: f64, dp: f64, n: usize) -> Self {
        let values = (0..n).map(|j| f(p0 + j as f64 * dp)).collect();
        Self { p0, dp, values }
    }

    /// Fallible variant of [`Self::sample`].
    pub fn try_sample<F: FnMut(f64) -> Result<f64>>(mut f: F, p0: f64, dp: f64, n: usize) -> Result<Self> {
        let values = (0..n).map(|j| f(p0 + j as f64 * dp)).collect::<Result<Vec<_>>>()?;
        Ok(Self { p0, dp, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p0 + j as f64 * self.dp
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(j, &q)| (self.p(j), q))
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dp
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (self.dp - other.dp).abs() <= 1e-12 * self.dp
            && (self.p0 - other.p0).abs() <= 1e-9 * self.dp
    }

    /// Band-limited resampling onto the grid of `target`. Target points
    /// outside this grid's window receive zero; fails if this distribution is
    /// not negligible at its own window edges, since periodic interpolation
    /// would then be meaningless.
    pub fn resample_like(&self, target: &Self) -> Result<Self> {
        if self.same_grid(target) {
            return Ok(self.clone());
        }
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let n = self.len();
        let edge = self.values[..2.min(n)]
            .iter()
            .chain(&self.values[n.saturating_sub(2)..])
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if edge > 1e-6 * peak {
            return Err(Error::GridMismatch(format!(
                "source not negligible at window edge ({edge:.2e} of peak {peak:.2e})"
            )));
        }
        let lo = self.p0;
        let hi = self.p0 + n as f64 * self.dp;
        let inside: Vec<f64> = (0..target.len()).map(|j| target.p(j)).collect();
        let mut vals = trig_interpolate(&self.values, self.p0, self.dp, &inside);
        for (j, v) in vals.iter_mut().enumerate() {
            let p = target.p(j);
            if p < lo || p > hi - self.dp {
                *v = 0.0;
            }
        }
        Ok(Self {
            p0: target.p0,
            dp: target.dp,
            values: vals,
        })
    }

    pub fn expect(&self, obs: ObservableSpec) -> f64 {
        self.points().map(|(p, q)| obs.eval(p) * q).sum::<f64>() * self.dp
    }

    pub fn mean(&self) -> f64 {
        self.points().map(|(p, q)| p * q).sum::<f64>() * self.dp / self.mass()
    }

    /// Central moment of order `n`, normalised by the mass.
    pub fn central_moment(&self, n: i32) -> f64 {
        let m = self.mean();
        self.points().map(|(p, q)| (p - m).powi(n) * q).sum::<f64>() * self.dp / self.mass()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Number of strict interior local maxima with `p` in `(lo, hi)`.
    pub fn local_maxima(&self, lo: f64, hi: f64) -> usize {
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .filter(|&j| {
                let p = self.p(j);
                p > lo && p < hi && v[j] > v[j - 1] && v[j] > v[j + 1]
            })
            .count()
    }
}

/// `sum |a - b| dp` on the grid of `b` (resampling `a` if needed).
pub fn l1_distance(a: &MomentumDistribution, b: &MomentumDistribution) -> Result<f64> {
    let a = a.resample_like(b)?;
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).sum::<f64>() * b.dp)
}

pub fn expect_observable(dist: &MomentumDistribution, obs: ObservableSpec) -> f64 {
    dist.expect(obs)
}
