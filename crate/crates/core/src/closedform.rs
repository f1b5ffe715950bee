//! Closed-system final momentum densities, checkpoint moments, and the
//! constants of the diffusion-error bounds.
//!
//! With `S = sqrt(h) e^{tau3 - tau1}` and `k = tau2 sqrt(h) e^{3 tau1}`, the
//! classical final momentum is `p = S (z1 + k z2^2)` for independent standard
//! normals `z1, z2`. Its density is a parabolic cylinder function; the
//! quantum density is the squared modulus of an Airy function.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::MomentRecord;
use crate::momentum::{MomentumDistribution, ObservableSpec};
use crate::schedule::Schedule;
use crate::specialfn::{
    adaptive_integral, airy_ai_scaled, erf, parabolic_cylinder_d_weighted, Domain, QuadratureSpec, Substitution,
};

fn check(tau1: f64, tau2: f64, tau3: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && tau1 >= 0.0 && tau2 > 0.0 && tau3 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "closed forms need h > 0, tau2 > 0, tau1, tau3 >= 0 (got h={h}, tau=({tau1}, {tau2}, {tau3}))"
        )));
    }
    Ok(())
}

fn finite(v: f64, p: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range {
            what: "closed-form density overflowed",
            value: p,
        })
    }
}

struct QuantumShape {
    pref: f64,
    e0: f64,
    alpha: f64,
    w0: f64,
    beta: f64,
}

impl QuantumShape {
    fn new(tau1: f64, tau2: f64, tau3: f64, h: f64) -> Self {
        let pref = 2f64.powf(1.0 / 6.0) * PI.sqrt() / (tau2.powf(2.0 / 3.0) * h.powf(5.0 / 6.0) * (tau1 + tau3).exp());
        let c = (tau3 - 4.0 * tau1).exp() / tau2;
        let de = 12.0 * tau2 * h * (2.0 * tau1 + tau3).exp();
        let dw = 2f64.powf(8.0 / 3.0) * tau2.powf(1.0 / 3.0) * h.powf(2.0 / 3.0) * tau3.exp();
        Self {
            pref,
            e0: c / de,
            alpha: -6.0 / de,
            w0: c / dw,
            beta: -4.0 / dw,
        }
    }

    /// `(q, q'')`
    fn eval(&self, p: f64) -> (f64, f64) {
        let w = self.w0 + self.beta * p;
        let (ai, aip, zeta) = airy_ai_scaled(w);
        let f = ai * ai;
        let fw = 2.0 * ai * aip;
        let fww = 2.0 * (aip * aip + w * ai * ai);
        let scale = self.pref * (self.e0 + self.alpha * p - 2.0 * zeta).exp();
        let a = self.alpha;
        let b = self.beta;
        (scale * f, scale * (a * a * f + 2.0 * a * b * fw + b * b * fww))
    }
}

/// Final quantum momentum density of the closed three-step evolution.
pub fn quantum_momentum_pdf(p: f64, tau1: f64, tau2: f64, tau3: f64, h: f64) -> Result<f64> {
    check(tau1, tau2, tau3, h)?;
    finite(QuantumShape::new(tau1, tau2, tau3, h).eval(p).0, p)
}

/// Second derivative in `p` of [`quantum_momentum_pdf`].
pub fn quantum_momentum_pdf_d2(p: f64, tau1: f64, tau2: f64, tau3: f64, h: f64) -> Result<f64> {
    check(tau1, tau2, tau3, h)?;
    finite(QuantumShape::new(tau1, tau2, tau3, h).eval(p).1, p)
}

fn classical_scales(tau1: f64, tau2: f64, tau3: f64, h: f64) -> (f64, f64) {
    let s = h.sqrt() * (tau3 - tau1).exp();
    let k = tau2 * h.sqrt() * (3.0 * tau1).exp();
    (s, k)
}

/// Final classical momentum density of the closed three-step evolution.
pub fn classical_momentum_pdf(p: f64, tau1: f64, tau2: f64, tau3: f64, h: f64) -> Result<f64> {
    check(tau1, tau2, tau3, h)?;
    let (s, k) = classical_scales(tau1, tau2, tau3, h);
    let y = p / s;
    let z = 0.5 / k - y;
    let d = parabolic_cylinder_d_weighted(-0.5, z, -0.5 * y * y + 0.25 * z * z)?;
    finite(d / (s * 2.0 * (PI * k).sqrt()), p)
}

/// Second derivative in `p` of [`classical_momentum_pdf`], from the
/// convolution form `int exp(-(y-s)^2/2 - s/2k) s^{-1/2} ds`.
pub fn classical_momentum_pdf_d2(p: f64, tau1: f64, tau2: f64, tau3: f64, h: f64) -> Result<f64> {
    check(tau1, tau2, tau3, h)?;
    let (s, k) = classical_scales(tau1, tau2, tau3, h);
    let y = p / s;
    let spec = QuadratureSpec::with_tolerances(1e-13, 1e-11).with_substitution(Substitution::SqrtLower);
    let f = |t: f64| {
        let d = y - t;
        (d * d - 1.0) * (-0.5 * d * d - 0.5 * t / k).exp() / t.sqrt()
    };
    // Split where the Gaussian factor peaks so the sqrt map sees the bulk.
    let split = y.max(1.0);
    let a = adaptive_integral(f, Domain::Finite(0.0, split), &spec)?.value;
    let b = adaptive_integral(
        |t| f(t + split),
        Domain::UpperInfinite(0.0),
        &QuadratureSpec::with_tolerances(1e-13, 1e-11),
    )?
    .value;
    finite((a + b) / (2.0 * PI * k.sqrt()) / (s * s * s), p)
}

/// Evaluation window that holds all but ~1e-20 of either density.
pub fn support(tau1: f64, tau2: f64, tau3: f64, h: f64) -> (f64, f64) {
    let (s, k) = classical_scales(tau1, tau2, tau3, h);
    (-20.0 * s, s * (100.0 * k + 20.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Quantum,
    Classical,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Quantum => "quantum",
            Side::Classical => "classical",
        }
    }
}

/// Closed-form final density of one side, as a callable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinalPdf {
    pub side: Side,
    pub tau: [f64; 3],
    pub h: f64,
}

impl FinalPdf {
    pub fn new(side: Side, tau: [f64; 3], h: f64) -> Result<Self> {
        check(tau[0], tau[1], tau[2], h)?;
        Ok(Self { side, tau, h })
    }

    /// Standard durations with the given `tau2`; the result does not depend on `h`.
    pub fn standard(side: Side, tau2: f64) -> Result<Self> {
        let h: f64 = 1e-3;
        let s = Schedule::standard_with_tau2(h, tau2)?;
        Self::new(side, s.tau(), h)
    }

    pub fn value(&self, p: f64) -> Result<f64> {
        let [a, b, c] = self.tau;
        match self.side {
            Side::Quantum => quantum_momentum_pdf(p, a, b, c, self.h),
            Side::Classical => classical_momentum_pdf(p, a, b, c, self.h),
        }
    }

    pub fn d2(&self, p: f64) -> Result<f64> {
        let [a, b, c] = self.tau;
        match self.side {
            Side::Quantum => quantum_momentum_pdf_d2(p, a, b, c, self.h),
            Side::Classical => classical_momentum_pdf_d2(p, a, b, c, self.h),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        let [a, b, c] = self.tau;
        support(a, b, c, self.h)
    }

    pub fn sample(&self, p0: f64, dp: f64, n: usize) -> Result<MomentumDistribution> {
        MomentumDistribution::try_sample(|p| self.value(p), p0, dp, n)
    }
}

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec {
        max_subdivisions: 20_000,
        ..QuadratureSpec::with_tolerances(1e-13, 1e-11)
    }
}

/// `int g` over `[lo, hi]`, split at a uniform set of breakpoints so
/// oscillatory integrands stay well sampled.
fn integrate_window<F: FnMut(f64) -> Result<f64>>(mut g: F, lo: f64, hi: f64, pieces: usize) -> Result<f64> {
    let mut err = None;
    let mut total = 0.0;
    for i in 0..pieces {
        let a = lo + (hi - lo) * i as f64 / pieces as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / pieces as f64;
        let r = adaptive_integral(
            |p| match g(p) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            Domain::Finite(a, b),
            &quad_spec(),
        )?;
        total += r.value;
    }
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// `int |g|` over `[lo, hi]` with breakpoints at sign changes of `g`.
fn l1_norm<F: FnMut(f64) -> Result<f64>>(mut g: F, lo: f64, hi: f64) -> Result<f64> {
    const SCAN: usize = 6000;
    let xs: Vec<f64> = (0..=SCAN).map(|i| lo + (hi - lo) * i as f64 / SCAN as f64).collect();
    let ys = xs.iter().map(|&x| g(x)).collect::<Result<Vec<f64>>>()?;
    let mut breaks = vec![lo];
    for i in 0..SCAN {
        if ys[i] == 0.0 || ys[i].signum() == ys[i + 1].signum() {
            continue;
        }
        let (mut a, mut b, mut fa) = (xs[i], xs[i + 1], ys[i]);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            let fm = g(m)?;
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        breaks.push(0.5 * (a + b));
    }
    breaks.push(hi);
    let mut total = 0.0;
    let mut err = None;
    for w in breaks.windows(2) {
        let r = adaptive_integral(
            |p| match g(p) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            Domain::Finite(w[0], w[1]),
            &quad_spec(),
        )?;
        total += r.value.abs();
    }
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Mass, mean and central moments (orders 2-4) of a closed-form density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdfMoments {
    pub mass: f64,
    pub mean: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

fn pieces(pdf: &FinalPdf) -> usize {
    let (lo, hi) = pdf.support();
    (((hi - lo) / 2.0).ceil() as usize).max(16)
}

pub fn pdf_moments(pdf: &FinalPdf) -> Result<PdfMoments> {
    let (lo, hi) = pdf.support();
    let n = pieces(pdf);
    let mass = integrate_window(|p| pdf.value(p), lo, hi, n)?;
    let mean = integrate_window(|p| Ok(p * pdf.value(p)?), lo, hi, n)? / mass;
    let central = |k: i32| integrate_window(|p| Ok((p - mean).powi(k) * pdf.value(p)?), lo, hi, n).map(|v| v / mass);
    Ok(PdfMoments {
        mass,
        mean,
        m2: central(2)?,
        m3: central(3)?,
        m4: central(4)?,
    })
}

/// `<g>` under a closed-form density.
pub fn pdf_expectation(pdf: &FinalPdf, obs: ObservableSpec) -> Result<f64> {
    let (lo, hi) = pdf.support();
    integrate_window(|p| Ok(obs.eval(p) * pdf.value(p)?), lo, hi, pieces(pdf))
}

/// `|| a - b ||_1` between two closed-form densities.
pub fn pdf_l1_distance(a: &FinalPdf, b: &FinalPdf) -> Result<f64> {
    let (lo, hi) = a.support();
    let (lo2, hi2) = b.support();
    l1_norm(|p| Ok(a.value(p)? - b.value(p)?), lo.min(lo2), hi.max(hi2))
}

/// `|| d^2 pdf / dp^2 ||_1`.
pub fn pdf_d2_l1(pdf: &FinalPdf) -> Result<f64> {
    let (lo, hi) = pdf.support();
    l1_norm(|p| pdf.d2(p), lo, hi)
}

/// Checkpoint means and central moments of the closed evolution (classical
/// third moment; see [`quantum_third_moment_offset`]).
pub fn predicted_moments(checkpoint: usize, tau1: f64, tau2: f64, tau3: f64, h: f64) -> Result<MomentRecord> {
    if checkpoint > 3 {
        return Err(Error::InvalidParameter(format!("checkpoint must be 0..=3, got {checkpoint}")));
    }
    let e1 = tau1.exp();
    let (sx, sp, kick, stretch) = match checkpoint {
        0 => (1.0, 1.0, 0.0, 1.0),
        1 => (e1, 1.0 / e1, 0.0, 1.0),
        2 => (e1, 1.0 / e1, tau2, 1.0),
        _ => (e1, 1.0 / e1, tau2, tau3.exp()),
    };
    // x2 = sigma_x z, p2 = sigma_p z' + kick sigma_x^2 z^2
    let sig_x2 = h * sx * sx;
    let sig_p2 = h * sp * sp;
    let b2 = kick * kick * sig_x2 * sig_x2;
    let mean_p = kick * sig_x2 * stretch;
    let k2 = sig_p2 + 2.0 * b2;
    let k3 = 8.0 * kick.powi(3) * sig_x2.powi(3);
    let k4 = 48.0 * b2 * b2;
    let (s2, s3, s4) = (stretch.powi(2), stretch.powi(3), stretch.powi(4));
    let xs = 1.0 / stretch;
    Ok(MomentRecord {
        mean_x: 0.0,
        mean_p,
        var_x: sig_x2 * xs * xs,
        var_p: k2 * s2,
        m3_x: 0.0,
        m3_p: k3 * s3,
        m4_x: 3.0 * sig_x2 * sig_x2 * xs.powi(4),
        m4_p: (k4 + 3.0 * k2 * k2) * s4,
    })
}

/// Quantum minus classical third central moment of `p` at a checkpoint:
/// the cubic Moyal term adds `-2 h^2 tau2` to the third cumulant during the
/// kick, which step 3 scales by `e^{3 tau3}`.
pub fn quantum_third_moment_offset(checkpoint: usize, tau2: f64, tau3: f64, h: f64) -> f64 {
    match checkpoint {
        0 | 1 => 0.0,
        2 => -2.0 * h * h * tau2,
        _ => -2.0 * h * h * tau2 * (3.0 * tau3).exp(),
    }
}

/// Constants of the diffusion-error bounds for a given kick duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub tau2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c_qu: f64,
    pub c_cl: f64,
    pub c_bar: f64,
    pub c0: f64,
    pub c_total: f64,
}

pub fn c1(tau2: f64) -> f64 {
    let t2 = tau2 * tau2;
    0.25 * (1.0 + 3f64.sqrt() + (1.0 + 2.0 * t2) + (3.0 + 12.0 * t2 + 60.0 * t2 * t2).sqrt())
}

/// `2 sqrt(2 / (pi e))`
pub fn c3() -> f64 {
    2.0 * (2.0 / (PI * std::f64::consts::E)).sqrt()
}

/// `sqrt(2/pi) [1 + 4 e^{-1/4} / sqrt(pi) - 2 erf(1/2)]`
pub fn c4() -> f64 {
    (2.0 / PI).sqrt() * (1.0 + 4.0 * (-0.25f64).exp() / PI.sqrt() - 2.0 * erf(0.5))
}

fn classical_prefactor(tau2: f64) -> f64 {
    let t2 = tau2 * tau2;
    c3() * (1.0 + 4.0 * t2) / (1.0 + 2.0 * t2) + c4() * tau2 / (1.0 + 2.0 * t2).sqrt()
}

fn compute_constants(tau2: f64) -> Result<BoundConstants> {
    let q = FinalPdf::standard(Side::Quantum, tau2)?;
    let c = FinalPdf::standard(Side::Classical, tau2)?;
    let c1 = c1(tau2);
    let c2 = 0.5 * pdf_d2_l1(&q)?;
    let c5 = pdf_d2_l1(&c)?;
    let c_qu = c1 + 2.0 / 3.0 * c2;
    let c_cl = classical_prefactor(tau2) + 0.5 * c5;
    let c_bar = pdf_l1_distance(&c, &q)?;
    let g0 = ObservableSpec::g0();
    let c0 = (pdf_expectation(&q, g0)? - pdf_expectation(&c, g0)?).abs();
    Ok(BoundConstants {
        tau2,
        c1,
        c2,
        c3: c3(),
        c4: c4(),
        c5,
        c_qu,
        c_cl,
        c_bar,
        c0,
        c_total: c_cl + c_qu,
    })
}

/// All bound constants at kick duration `tau2`. Memoised per `tau2`.
pub fn constants(tau2: f64) -> Result<BoundConstants> {
    if !(tau2 > 0.0 && tau2.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau2 must be positive, got {tau2}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, BoundConstants>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("constants cache poisoned").get(&tau2.to_bits()) {
        return Ok(*c);
    }
    let c = compute_constants(tau2)?;
    cache.lock().expect("constants cache poisoned").insert(tau2.to_bits(), c);
    Ok(c)
}

/// Upper bound on `|| q_3^D - q_3 ||_1` (quantum) or `|| c_3^D - c_3 ||_1`
/// (classical) from the Duhamel expansion in `D`.
pub fn duhamel_bound(side: Side, h: f64, d: f64, schedule: &Schedule) -> Result<f64> {
    if !(d >= 0.0) {
        return Err(Error::InvalidParameter(format!("D must be nonnegative, got {d}")));
    }
    if !schedule.technical_ok(h) {
        return Err(Error::Validity(format!(
            "tau1 = {} violates tau1 < log(1/h)/4 = {} at h = {h}",
            schedule.tau()[0],
            0.25 * (1.0 / h).ln()
        )));
    }
    let [tau1, tau2, tau3] = schedule.tau();
    let k = constants(tau2)?;
    if schedule.is_standard(h) {
        let c = match side {
            Side::Quantum => k.c_qu,
            Side::Classical => k.c_cl,
        };
        return Ok(c * (1.0 + (1.0 / h).ln()) * d / h.powf(4.0 / 3.0));
    }
    let early = (tau1 + tau2) * (2.0 * tau1).exp() / h;
    let late = tau3 * (2.0 * tau3).exp();
    Ok(match side {
        Side::Quantum => (k.c1 * early + k.c2 * late) * d,
        Side::Classical => (classical_prefactor(tau2) * early + 0.5 * k.c5 * late) * d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{gamma, parabolic_cylinder_d};

    fn std_tau(h: f64) -> [f64; 3] {
        Schedule::standard(h).unwrap().tau()
    }

    #[test]
    fn quantum_value_where_airy_argument_vanishes() {
        let [a, b, c] = std_tau(1e-3);
        let ai0 = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
        let want = 2f64.powf(1.0 / 6.0) * PI.sqrt() * (-1.0f64 / 24.0).exp() * ai0 * ai0;
        let got = quantum_momentum_pdf(0.25, a, b, c, 1e-3).unwrap();
        assert!((got - want).abs() < 1e-13);
        assert!((got - 0.2405).abs() < 1e-4);
    }

    #[test]
    fn classical_value_where_pcf_argument_vanishes() {
        let [a, b, c] = std_tau(1e-3);
        let want = (-0.125f64).exp() * parabolic_cylinder_d(-0.5, 0.0).unwrap() / (2.0 * PI.sqrt());
        let got = classical_momentum_pdf(0.5, a, b, c, 1e-3).unwrap();
        assert!((got - want).abs() < 1e-13);
        assert!((got - 0.3028).abs() < 1e-4);
    }

    #[test]
    fn standard_form_matches_reduced_expression() {
        let [a, b, c] = std_tau(0.02);
        for &p in &[-2.0f64, 0.0, 0.7, 3.0, 9.0] {
            let z = 0.5 - p;
            let reduced = (-0.5 * p * p + 0.25 * (p - 0.5) * (p - 0.5)).exp()
                * parabolic_cylinder_d(-0.5, z).unwrap()
                / (2.0 * PI.sqrt());
            let got = classical_momentum_pdf(p, a, b, c, 0.02).unwrap();
            assert!((got - reduced).abs() < 1e-12 * reduced.max(1e-3), "p={p}");
        }
    }

    #[test]
    fn classical_density_is_a_convolution_law() {
        // Independent oracle: p = S (z1 + k z2^2) integrated directly over z2.
        let (h, tau) = (0.1, [0.3, 0.7, 1.1]);
        let (s, k) = classical_scales(tau[0], tau[1], tau[2], h);
        for &p in &[-0.3, 0.2, 1.0, 2.5] {
            let y = p / s;
            let r = adaptive_integral(
                |z2: f64| {
                    let d = y - k * z2 * z2;
                    (-0.5 * d * d - 0.5 * z2 * z2).exp() / (2.0 * PI)
                },
                Domain::Whole,
                &QuadratureSpec::with_tolerances(1e-15, 1e-13),
            )
            .unwrap()
            .value
                / s;
            let got = classical_momentum_pdf(p, tau[0], tau[1], tau[2], h).unwrap();
            assert!((got - r).abs() < 1e-11, "p={p}: {got} vs {r}");
        }
    }

    #[test]
    fn quantum_density_is_squared_fourier_transform() {
        // |psi_3(p)|^2 via direct quadrature of the kicked Gaussian.
        let (h, tau) = (0.05f64, [0.4f64, 0.8, 1.2]);
        let hbar = 2.0 * h;
        let sx2 = h * (2.0 * tau[0]).exp();
        for &p3 in &[-0.5, 0.3, 1.7] {
            let p = p3 * (-tau[2]).exp();
            let amp = |x: f64| (2.0 * PI * sx2).powf(-0.25) * (-x * x / (4.0 * sx2)).exp();
            let phase = |x: f64| tau[1] * x.powi(3) / (3.0 * hbar) - p * x / hbar;
            let spec = QuadratureSpec::with_tolerances(1e-14, 1e-12);
            let half = 12.0 * sx2.sqrt();
            let re = adaptive_integral(|x| amp(x) * phase(x).cos(), Domain::Finite(-half, half), &spec)
                .unwrap()
                .value;
            let im = adaptive_integral(|x| amp(x) * phase(x).sin(), Domain::Finite(-half, half), &spec)
                .unwrap()
                .value;
            let want = (re * re + im * im) / (2.0 * PI * hbar) * (-tau[2]).exp();
            let got = quantum_momentum_pdf(p3, tau[0], tau[1], tau[2], h).unwrap();
            assert!((got - want).abs() < 1e-10 * want.max(1e-3), "p={p3}: {got} vs {want}");
        }
    }

    #[test]
    fn h_independent_at_standard_durations() {
        let (t1, t2) = (std_tau(1e-3), std_tau(1e-6));
        for i in -40..=160 {
            let p = i as f64 * 0.1;
            let q1 = quantum_momentum_pdf(p, t1[0], t1[1], t1[2], 1e-3).unwrap();
            let q2 = quantum_momentum_pdf(p, t2[0], t2[1], t2[2], 1e-6).unwrap();
            let c1 = classical_momentum_pdf(p, t1[0], t1[1], t1[2], 1e-3).unwrap();
            let c2 = classical_momentum_pdf(p, t2[0], t2[1], t2[2], 1e-6).unwrap();
            assert!((q1 - q2).abs() < 1e-10 && (c1 - c2).abs() < 1e-10, "p={p}");
        }
    }

    #[test]
    fn second_derivatives_match_finite_differences() {
        for side in [Side::Quantum, Side::Classical] {
            let f = FinalPdf::standard(side, 1.0).unwrap();
            for &p in &[-1.0, 0.2, 1.3, 4.0] {
                let e = 1e-3;
                let fd = (f.value(p + e).unwrap() - 2.0 * f.value(p).unwrap() + f.value(p - e).unwrap()) / (e * e);
                let d = f.d2(p).unwrap();
                assert!((fd - d).abs() < 1e-5, "{side:?} p={p}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn predicted_standard_values() {
        let h = 0.01f64;
        let [a, b, c] = std_tau(h);
        let m3 = predicted_moments(3, a, b, c, h).unwrap();
        assert!((m3.mean_p - 1.0).abs() < 1e-12);
        assert!((m3.var_p - 3.0).abs() < 1e-12);
        assert!((m3.m4_p - 75.0).abs() < 1e-10);
        assert!((m3.m3_p - 8.0).abs() < 1e-10);
        assert!((quantum_third_moment_offset(3, b, c, h) + 2.0).abs() < 1e-12);
        let m2 = predicted_moments(2, a, b, c, h).unwrap();
        assert!((m2.var_p - 3.0 * h.powf(4.0 / 3.0)).abs() < 1e-14);
        assert!((m2.mean_p - h.powf(2.0 / 3.0)).abs() < 1e-14);
        let m0 = predicted_moments(0, a, b, c, h).unwrap();
        assert_eq!((m0.var_x, m0.var_p, m0.m4_x), (h, h, 3.0 * h * h));
        assert!(predicted_moments(4, a, b, c, h).is_err());
    }

    #[test]
    fn formula_constants() {
        assert!((c1(1.0) - (1.0 + 1.5 * 3f64.sqrt())).abs() < 1e-14);
        assert!((c3() - 0.9679).abs() < 1e-4);
        assert!((c4() - 1.370).abs() < 1e-3);
    }

    #[test]
    fn bound_gates_and_scaling() {
        let h = (-6f64).exp();
        let s = Schedule::standard(h).unwrap();
        assert_eq!(duhamel_bound(Side::Quantum, h, 0.0, &s).unwrap(), 0.0);
        let b = duhamel_bound(Side::Quantum, h, (-8f64).exp(), &s).unwrap();
        let k = constants(1.0).unwrap();
        assert!((b - 7.0 * k.c_qu).abs() < 1e-9);
        let bad = Schedule::new(0.3 * 10f64.ln(), 1.0, 1.0).unwrap();
        assert!(matches!(duhamel_bound(Side::Classical, 0.1, 1e-3, &bad), Err(Error::Validity(_))));
    }

    #[test]
    fn general_bound_dominated_by_standard_form() {
        let h = 0.05;
        let s = Schedule::standard(h).unwrap();
        let shifted = Schedule::new(s.tau()[0], 1.0, s.tau()[2] + 1e-9).unwrap();
        for side in [Side::Quantum, Side::Classical] {
            let simple = duhamel_bound(side, h, 1e-3, &s).unwrap();
            let general = duhamel_bound(side, h, 1e-3, &shifted).unwrap();
            assert!(general <= simple * (1.0 + 1e-6), "{side:?}");
        }
    }
}
