//! Adaptive Gauss-Kronrod (7/15) integration with global subdivision.
//!
//! The interval with the largest error estimate is bisected until the total
//! estimate meets `max(abs_tol, rel_tol * |value|)`. Infinite ranges and
//! inverse-square-root endpoint singularities are handled by a change of
//! variables before the rule is applied, so the rule itself only ever sees a
//! finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// `[a, +inf)`
    UpperInfinite(f64),
    /// `(-inf, b]`
    LowerInfinite(f64),
    Whole,
}

/// Change of variables applied at the lower endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Substitution {
    #[default]
    None,
    /// `x = a + u^2`; removes an `(x - a)^(-1/2)` singularity at the lower end.
    SqrtLower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub substitution: Substitution,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
            substitution: Substitution::None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_substitution(mut self, substitution: Substitution) -> Self {
        self.substitution = substitution;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_k = fc * WGK[7];
    let mut result_g = fc * WG[3];
    let mut result_abs = result_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        result_k += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_k;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = result_k * half;
    let result_abs = result_abs * half.abs();
    let result_asc = result_asc * half.abs();
    let mut err = ((result_k - result_g) * half).abs();
    if result_asc != 0.0 && err != 0.0 {
        err = result_asc * (200.0 * err / result_asc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * result_abs;
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(round);
    }
    (value, err)
}

fn adaptive_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let (v0, e0) = kronrod15(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol || !total_err.is_finite() {
            break;
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::Convergence {
                partial: total,
                estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            heap.push(worst);
            return Err(Error::Convergence {
                partial: total,
                estimate: total_err,
            });
        }
        let (vl, el) = kronrod15(&mut f, worst.a, mid);
        let (vr, er) = kronrod15(&mut f, mid, worst.b);
        evaluations += 30;
        total += vl + vr - worst.value;
        total_err += el + er - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: vl,
            error: el,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: vr,
            error: er,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    if !value.is_finite() {
        return Err(Error::Convergence {
            partial: value,
            estimate: error,
        });
    }
    Ok(QuadResult {
        value,
        error,
        evaluations,
        intervals: heap.len(),
    })
}

/// Integrates `f` over `domain` to the tolerances in `spec`.
pub fn adaptive_integral<F: FnMut(f64) -> f64>(
    mut f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    match (domain, spec.substitution) {
        (Domain::Finite(a, b), Substitution::None) => {
            if a == b {
                return Ok(QuadResult {
                    value: 0.0,
                    error: 0.0,
                    evaluations: 0,
                    intervals: 0,
                });
            }
            adaptive_finite(f, a, b, spec)
        }
        (Domain::Finite(a, b), Substitution::SqrtLower) => {
            if b < a {
                return Err(Error::InvalidParameter(
                    "sqrt substitution needs a <= b".into(),
                ));
            }
            adaptive_finite(|u| 2.0 * u * f(a + u * u), 0.0, (b - a).sqrt(), spec)
        }
        (Domain::UpperInfinite(a), Substitution::None) => adaptive_finite(
            |t| {
                let s = 1.0 - t;
                f(a + t / s) / (s * s)
            },
            0.0,
            1.0,
            spec,
        ),
        (Domain::UpperInfinite(a), Substitution::SqrtLower) => adaptive_finite(
            |t| {
                let s = 1.0 - t;
                let u = t / s;
                2.0 * u * f(a + u * u) / (s * s)
            },
            0.0,
            1.0,
            spec,
        ),
        (Domain::LowerInfinite(b), Substitution::None) => adaptive_finite(
            |t| {
                let s = 1.0 - t;
                f(b - t / s) / (s * s)
            },
            0.0,
            1.0,
            spec,
        ),
        (Domain::Whole, Substitution::None) => adaptive_finite(
            |t| {
                let s = 1.0 - t * t;
                f(t / s) * (1.0 + t * t) / (s * s)
            },
            -1.0,
            1.0,
            spec,
        ),
        (d, s) => Err(Error::InvalidParameter(format!(
            "substitution {s:?} is not defined for domain {d:?}"
        ))),
    }
}

/// Sum of adaptive integrals over consecutive breakpoints. Useful when the
/// integrand has known features (peaks, kinks) at fixed locations.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mut acc = QuadResult {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
        intervals: 0,
    };
    for w in breakpoints.windows(2) {
        let r = adaptive_integral(&mut f, Domain::Finite(w[0], w[1]), spec)?;
        acc.value += r.value;
        acc.error += r.error;
        acc.evaluations += r.evaluations;
        acc.intervals += r.intervals;
    }
    Ok(acc)
}
