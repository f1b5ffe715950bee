//! Monte-Carlo sampling of the classical Fokker-Planck evolution by
//! stochastic trajectories in lab coordinates.

use rand::Rng;
use rand_distr::StandardNormal;
use rand_pcg::Pcg64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::momentum::MomentumDistribution;
use crate::params::SemiclassicalParams;
use crate::schedule::Schedule;

pub const RUNAWAY: f64 = 50.0;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    pub seed: u64,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

fn stream(seed: u64, chunk: usize, salt: u64) -> Pcg64 {
    let state = ((seed as u128) << 64) | salt as u128;
    let mut rng = Pcg64::new(state, 0xa02b_dbf7_bb3c_0a7a_c28f_a16a_64ab_f96d ^ ((chunk as u128) << 1));
    // Decorrelate the first outputs of neighbouring streams.
    for _ in 0..4 {
        let _: u64 = rng.random();
    }
    rng
}

impl TrajectoryEnsemble {
    /// `m` samples of the coherent state `x, p ~ N(0, h)`.
    pub fn coherent(h: f64, m: usize, seed: u64) -> Result<Self> {
        if m == 0 || !(h > 0.0) {
            return Err(Error::InvalidParameter("ensemble needs m >= 1 and h > 0".into()));
        }
        let s = h.sqrt();
        let mut x = vec![0.0; m];
        let mut p = vec![0.0; m];
        let fill = |(c, (xs, ps)): (usize, (&mut [f64], &mut [f64]))| {
            let mut rng = stream(seed, c, 0);
            for (a, b) in xs.iter_mut().zip(ps.iter_mut()) {
                *a = s * rng.sample::<f64, _>(StandardNormal);
                *b = s * rng.sample::<f64, _>(StandardNormal);
            }
        };
        #[cfg(feature = "parallel")]
        x.par_chunks_mut(CHUNK).zip(p.par_chunks_mut(CHUNK)).enumerate().for_each(fill);
        #[cfg(not(feature = "parallel"))]
        x.chunks_mut(CHUNK).zip(p.chunks_mut(CHUNK)).enumerate().for_each(fill);
        Ok(Self { seed, x, p })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn variance(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        v.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / n
    }

    pub fn var_x(&self) -> f64 {
        Self::variance(&self.x)
    }

    pub fn var_p(&self) -> f64 {
        Self::variance(&self.p)
    }

    /// Momentum histogram as a density; bin `b` covers
    /// `[edge0 + b width, edge0 + (b+1) width)` and is reported at its centre.
    pub fn momentum_histogram(&self, edge0: f64, width: f64, bins: usize) -> MomentumDistribution {
        let mut counts = vec![0.0; bins];
        for &p in &self.p {
            let b = ((p - edge0) / width).floor();
            if b >= 0.0 && (b as usize) < bins {
                counts[b as usize] += 1.0;
            }
        }
        let norm = 1.0 / (self.len() as f64 * width);
        MomentumDistribution {
            p0: edge0 + 0.5 * width,
            dp: width,
            values: counts.into_iter().map(|c| c * norm).collect(),
        }
    }
}

/// Cell averages of `dist` over consecutive groups of `factor` nodes, on the
/// bins `[p0 - dp/2 + b factor dp, ...)`. Pairs with
/// [`TrajectoryEnsemble::momentum_histogram`] using the same edges.
pub fn coarse_grain(dist: &MomentumDistribution, factor: usize) -> MomentumDistribution {
    let values = dist
        .values
        .chunks_exact(factor)
        .map(|c| c.iter().sum::<f64>() / factor as f64)
        .collect();
    MomentumDistribution {
        p0: dist.p0 - 0.5 * dist.dp + 0.5 * factor as f64 * dist.dp,
        dp: factor as f64 * dist.dp,
        values,
    }
}

/// Ensembles at `t0..t3`. Each step of length `dt` applies the exact linear
/// flow `x -> e^{da} x`, `p -> e^{-da} p`, the kick `p += dk x^2` with drift
/// increments integrated exactly over the step, then Gaussian increments of
/// variance `D dt`.
pub fn langevin_sample(
    ensemble0: &TrajectoryEnsemble,
    schedule: &Schedule,
    params: &SemiclassicalParams,
    dt: f64,
    seed: u64,
) -> Result<Vec<TrajectoryEnsemble>> {
    if !(dt > 0.0 && dt <= 1e-3) {
        return Err(Error::InvalidParameter(format!("dt must lie in (0, 1e-3], got {dt}")));
    }
    let d = params.diffusion();
    let cps = schedule.checkpoints();
    let mut out = vec![ensemble0.clone()];
    let mut cur = ensemble0.clone();
    cur.seed = seed;
    for step in 0..3 {
        let (ta, tb) = (cps[step], cps[step + 1]);
        if tb > ta {
            let n = ((tb - ta) / dt).ceil() as usize;
            let h = (tb - ta) / n as f64;
            let incr: Vec<(f64, f64)> = (0..n)
                .map(|k| {
                    let s0 = ta + k as f64 * h;
                    let s1 = if k + 1 == n { tb } else { s0 + h };
                    let da = schedule.chi_integral(0, s0, s1) - schedule.chi_integral(2, s0, s1);
                    (da, schedule.chi_integral(1, s0, s1))
                })
                .collect();
            let noise = (d * h).sqrt();
            let run = |(c, (xs, ps)): (usize, (&mut [f64], &mut [f64]))| -> Result<()> {
                let mut rng = stream(seed, c, 1 + step as u64);
                for (x, p) in xs.iter_mut().zip(ps.iter_mut()) {
                    let (mut xv, mut pv) = (*x, *p);
                    for &(da, dk) in &incr {
                        xv *= da.exp();
                        pv = pv * (-da).exp() + dk * xv * xv;
                        if noise > 0.0 {
                            xv += noise * rng.sample::<f64, _>(StandardNormal);
                            pv += noise * rng.sample::<f64, _>(StandardNormal);
                        }
                        if xv.abs() > RUNAWAY {
                            return Err(Error::SolverFailure(format!("trajectory ran away: |x| = {}", xv.abs())));
                        }
                    }
                    *x = xv;
                    *p = pv;
                }
                Ok(())
            };
            #[cfg(feature = "parallel")]
            cur.x
                .par_chunks_mut(CHUNK)
                .zip(cur.p.par_chunks_mut(CHUNK))
                .enumerate()
                .map(run)
                .collect::<Result<Vec<()>>>()?;
            #[cfg(not(feature = "parallel"))]
            cur.x
                .chunks_mut(CHUNK)
                .zip(cur.p.chunks_mut(CHUNK))
                .enumerate()
                .map(run)
                .collect::<Result<Vec<()>>>()?;
        }
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let a = TrajectoryEnsemble::coherent(0.05, 10_000, 7).unwrap();
        let b = TrajectoryEnsemble::coherent(0.05, 10_000, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, TrajectoryEnsemble::coherent(0.05, 10_000, 8).unwrap());
    }

    #[test]
    fn closed_kick_is_exact_transport() {
        let h = 0.05;
        let s = Schedule::new(0.0, 1.3, 0.0).unwrap();
        let p = SemiclassicalParams::from_h(h, 0.0).unwrap();
        let e0 = TrajectoryEnsemble::coherent(h, 1000, 1).unwrap();
        let out = langevin_sample(&e0, &s, &p, 1e-3, 3).unwrap();
        for i in 0..e0.len() {
            let want = e0.p[i] + 1.3 * e0.x[i] * e0.x[i];
            assert!((out[3].p[i] - want).abs() < 1e-12);
            assert_eq!(out[3].x[i], e0.x[i]);
        }
    }

    #[test]
    fn brownian_variance_growth() {
        let h = 0.05;
        let d = 0.01;
        let s = Schedule::new(0.3, 0.4, 0.3).unwrap().with_couplings([0.0; 3]);
        let p = SemiclassicalParams::from_h(h, d).unwrap();
        let m = 200_000;
        let e0 = TrajectoryEnsemble::coherent(h, m, 11).unwrap();
        let out = langevin_sample(&e0, &s, &p, 1e-3, 12).unwrap();
        let want = h + d * 1.0;
        let mc = 3.0 * want * (2.0 / m as f64).sqrt();
        assert!((out[3].var_x() - want).abs() < mc);
        assert!((out[3].var_p() - want).abs() < mc);
    }

    #[test]
    fn rejects_coarse_steps() {
        let s = Schedule::standard(0.05).unwrap();
        let p = SemiclassicalParams::from_h(0.05, 0.0).unwrap();
        let e0 = TrajectoryEnsemble::coherent(0.05, 10, 1).unwrap();
        assert!(langevin_sample(&e0, &s, &p, 1e-2, 1).is_err());
    }
}
