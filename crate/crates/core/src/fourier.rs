//! Row/column FFT helpers on row-major complex arrays.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Angular frequencies of an `n`-point periodic grid with spacing `d`.
/// The Nyquist entry is returned as `-pi/d`.
pub fn wavenumbers(n: usize, d: f64) -> Vec<f64> {
    let base = 2.0 * PI / (n as f64 * d);
    (0..n)
        .map(|j| {
            let m = if j < n.div_ceil(2) { j as isize } else { j as isize - n as isize };
            m as f64 * base
        })
        .collect()
}

/// Like [`wavenumbers`] but zero at the Nyquist index, for odd multipliers
/// that must keep real data real.
pub fn odd_wavenumbers(n: usize, d: f64) -> Vec<f64> {
    let mut k = wavenumbers(n, d);
    if n % 2 == 0 {
        k[n / 2] = 0.0;
    }
    k
}

pub struct LinePlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl LinePlan {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Transforms every contiguous line of `data` in place. The inverse is
    /// normalised by `1/len`.
    pub fn process(&self, data: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inverse } else { &self.forward };
        let len = self.len;
        #[cfg(feature = "parallel")]
        {
            let rows_per_task = (4096 / len).max(1);
            data.par_chunks_mut(len * rows_per_task)
                .for_each(|chunk| plan.process(chunk));
        }
        #[cfg(not(feature = "parallel"))]
        plan.process(data);
        if inverse {
            let s = 1.0 / len as f64;
            for z in data.iter_mut() {
                *z *= s;
            }
        }
    }
}

/// Out-of-place transpose of a `rows x cols` row-major array.
pub fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 32;
    for ib in (0..rows).step_by(B) {
        for jb in (0..cols).step_by(B) {
            for i in ib..(ib + B).min(rows) {
                for j in jb..(jb + B).min(cols) {
                    dst[j * rows + i] = src[i * cols + j];
                }
            }
        }
    }
}

/// Two-dimensional transforms of a `nu x nv` row-major array.
pub struct Plan2 {
    pub nu: usize,
    pub nv: usize,
    rows: LinePlan,
    cols: LinePlan,
    scratch: Vec<Complex64>,
}

impl Plan2 {
    pub fn new(nu: usize, nv: usize) -> Self {
        Self {
            nu,
            nv,
            rows: LinePlan::new(nv),
            cols: LinePlan::new(nu),
            scratch: vec![Complex64::default(); nu * nv],
        }
    }

    /// Transform along `v` (contiguous rows).
    pub fn along_v(&self, data: &mut [Complex64], inverse: bool) {
        self.rows.process(data, inverse);
    }

    /// Transform along `u` (columns).
    pub fn along_u(&mut self, data: &mut [Complex64], inverse: bool) {
        transpose(data, &mut self.scratch, self.nu, self.nv);
        self.cols.process(&mut self.scratch, inverse);
        transpose(&self.scratch, data, self.nv, self.nu);
    }

    pub fn full(&mut self, data: &mut [Complex64], inverse: bool) {
        self.along_v(data, inverse);
        self.along_u(data, inverse);
    }

    /// Plan for the `u`-lines of the transposed (`nv x nu`) layout.
    pub fn u_lines(&self) -> &LinePlan {
        &self.cols
    }
}

/// Band-limited interpolant of periodic samples `values[j] = f(x0 + j dx)`
/// evaluated at `targets`. The Nyquist mode is split symmetrically so real
/// data gives a real interpolant.
pub fn trig_interpolate(values: &[f64], x0: f64, dx: f64, targets: &[f64]) -> Vec<f64> {
    let n = values.len();
    let plan = LinePlan::new(n);
    let mut c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan.process(&mut c, false);
    let k = wavenumbers(n, dx);
    targets
        .iter()
        .map(|&x| {
            let y = x - x0;
            let mut acc = 0.0;
            for j in 0..n {
                let phase = k[j] * y;
                let w = if n % 2 == 0 && j == n / 2 {
                    // Average of +k and -k: cos only.
                    c[j].re * phase.cos()
                } else {
                    c[j].re * phase.cos() - c[j].im * phase.sin()
                };
                acc += w;
            }
            acc / n as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_layout() {
        let k = wavenumbers(8, 0.5);
        let b = 2.0 * PI / 4.0;
        assert_eq!(k[0], 0.0);
        assert!((k[1] - b).abs() < 1e-15);
        assert!((k[4] + 4.0 * b).abs() < 1e-15);
        assert!((k[7] + b).abs() < 1e-15);
        assert_eq!(odd_wavenumbers(8, 0.5)[4], 0.0);
    }

    #[test]
    fn round_trip() {
        let (nu, nv) = (12, 20);
        let mut p = Plan2::new(nu, nv);
        let data: Vec<Complex64> = (0..nu * nv)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut x = data.clone();
        p.full(&mut x, false);
        p.full(&mut x, true);
        for (a, b) in x.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn interpolates_band_limited_signal() {
        let n = 64;
        let dx = 0.1;
        let f = |x: f64| (2.0 * PI * 3.0 * x / (n as f64 * dx)).sin() + 0.5;
        let vals: Vec<f64> = (0..n).map(|j| f(-1.0 + j as f64 * dx)).collect();
        let t = [0.013, 1.234, 5.0];
        let r = trig_interpolate(&vals, -1.0, dx, &t);
        for (x, y) in t.iter().zip(r) {
            assert!((f(*x) - y).abs() < 1e-12);
        }
    }
}
