//! Airy function of the first kind on the real line.
//!
//! Three regimes:
//! - `[-12, 1]`: Taylor expansion about the nearest node of a table built by
//!   analytic continuation of the ODE `y'' = z y` from the origin.
//! - `z > 1`: the Macdonald-function representation, with `K_nu` evaluated by
//!   the trapezoid rule on `int_0^inf exp(-zeta cosh t) cosh(nu t) dt`.
//! - `z < -12`: the oscillatory asymptotic expansion.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const AIRY_MAX_ARG: f64 = 50.0;

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = -0.258_819_403_792_806_8;

const TABLE_LO: f64 = -12.0;
const TABLE_HI: f64 = 1.0;
const NODE_STEP: f64 = 0.25;
const TAYLOR_TERMS: usize = 40;

struct Table {
    ai: Vec<f64>,
    aip: Vec<f64>,
}

// Sum of the Taylor series of the solution through (z0, y0, y0') at z0 + d.
fn taylor(z0: f64, y0: f64, yp0: f64, d: f64) -> (f64, f64) {
    let mut a = [0.0f64; TAYLOR_TERMS + 1];
    a[0] = y0;
    a[1] = yp0;
    a[2] = 0.5 * z0 * y0;
    for n in 1..TAYLOR_TERMS - 1 {
        a[n + 2] = (z0 * a[n] + a[n - 1]) / (((n + 2) * (n + 1)) as f64);
    }
    let mut val = 0.0;
    let mut der = 0.0;
    for n in (0..TAYLOR_TERMS).rev() {
        val = val * d + a[n];
        if n > 0 {
            der = der * d + n as f64 * a[n];
        }
    }
    (val, der)
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = ((TABLE_HI - TABLE_LO) / NODE_STEP).round() as usize + 1;
        let origin = (-TABLE_LO / NODE_STEP).round() as usize;
        let mut ai = vec![0.0; n];
        let mut aip = vec![0.0; n];
        ai[origin] = AI0;
        aip[origin] = AIP0;
        for i in (0..origin).rev() {
            let z0 = TABLE_LO + (i + 1) as f64 * NODE_STEP;
            let (v, d) = taylor(z0, ai[i + 1], aip[i + 1], -NODE_STEP);
            ai[i] = v;
            aip[i] = d;
        }
        for i in origin + 1..n {
            let z0 = TABLE_LO + (i - 1) as f64 * NODE_STEP;
            let (v, d) = taylor(z0, ai[i - 1], aip[i - 1], NODE_STEP);
            ai[i] = v;
            aip[i] = d;
        }
        Table { ai, aip }
    })
}

fn from_table(z: f64) -> (f64, f64) {
    let t = table();
    let i = ((z - TABLE_LO) / NODE_STEP).round() as usize;
    let i = i.min(t.ai.len() - 1);
    let z0 = TABLE_LO + i as f64 * NODE_STEP;
    taylor(z0, t.ai[i], t.aip[i], z - z0)
}

// exp(zeta) * K_nu(zeta)
fn bessel_k_scaled(nu: f64, zeta: f64) -> f64 {
    const STEP: f64 = 0.2;
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * STEP;
        let term = (-zeta * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    sum * STEP
}

// Scaled (Ai e^zeta, Ai' e^zeta) for z > 0.
fn positive_scaled(z: f64, zeta: f64) -> (f64, f64) {
    let k13 = bessel_k_scaled(1.0 / 3.0, zeta);
    let k23 = bessel_k_scaled(2.0 / 3.0, zeta);
    let ai = (z / 3.0).sqrt() * k13 / PI;
    let aip = -z * k23 / (PI * 3f64.sqrt());
    (ai, aip)
}

fn negative_asymptotic(z: f64) -> (f64, f64) {
    let x = -z;
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    // u_k and v_k coefficients divided by zeta^k, accumulated while decreasing.
    let mut u = 1.0f64;
    let mut su_even = 1.0;
    let mut su_odd = 0.0;
    let mut sv_even = 1.0;
    let mut sv_odd = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let next = u * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf)
            / zeta;
        if next.abs() >= last || next.abs() < 1e-17 {
            break;
        }
        u = next;
        last = u.abs();
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            su_even += sign * u;
            sv_even += sign * v;
        } else {
            su_odd += sign * u;
            sv_odd += sign * v;
        }
    }
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let ai = (c * su_even + s * su_odd) / (PI.sqrt() * x.powf(0.25));
    let aip = x.powf(0.25) / PI.sqrt() * (s * sv_even - c * sv_odd);
    (ai, aip)
}

/// `(Ai(z), Ai'(z))` without range checking.
pub fn airy_ai_pair(z: f64) -> (f64, f64) {
    if z > TABLE_HI {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let (a, d) = positive_scaled(z, zeta);
        let e = (-zeta).exp();
        (a * e, d * e)
    } else if z >= TABLE_LO {
        from_table(z)
    } else {
        negative_asymptotic(z)
    }
}

/// `(Ai(z) e^zeta, Ai'(z) e^zeta, zeta)` with `zeta = (2/3) z^{3/2}` for
/// `z > 0` and `zeta = 0` otherwise. Finite for arbitrarily large `z`.
pub fn airy_ai_scaled(z: f64) -> (f64, f64, f64) {
    if z > TABLE_HI {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let (a, d) = positive_scaled(z, zeta);
        (a, d, zeta)
    } else if z > 0.0 {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let (a, d) = from_table(z);
        let e = zeta.exp();
        (a * e, d * e, zeta)
    } else {
        let (a, d) = airy_ai_pair(z);
        (a, d, 0.0)
    }
}

/// `Ai(z)` for `|z| <= 50`.
pub fn airy_ai(z: f64) -> Result<f64> {
    if !z.is_finite() || z.abs() > AIRY_MAX_ARG {
        return Err(Error::Range {
            what: "Airy argument must satisfy |z| <= 50",
            value: z,
        });
    }
    Ok(airy_ai_pair(z).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{adaptive_integral, gamma, Domain, QuadratureSpec};

    // (1/2pi) int exp(i(s^3/3 + z s)) dt along s = t + i c.
    fn contour_oracle(z: f64) -> f64 {
        let c = if z > 0.0 { z.sqrt() } else { (2.0 / z.abs().max(1.0)).min(1.0) };
        let spec = QuadratureSpec {
            max_subdivisions: 50_000,
            ..QuadratureSpec::with_tolerances(5e-13, 1e-300)
        };
        let half = (40.0 / c).sqrt();
        let r = adaptive_integral(
            |t: f64| {
                let re = -t * t * c + c * c * c / 3.0 - z * c;
                let im = t * t * t / 3.0 - t * c * c + z * t;
                re.exp() * im.cos()
            },
            Domain::Finite(-half, half),
            &spec,
        )
        .unwrap();
        r.value / (2.0 * PI)
    }

    #[test]
    fn value_at_origin() {
        let exact = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
        assert!((airy_ai(0.0).unwrap() - exact).abs() < 1e-15);
        assert!((exact - 0.355_028_053_9).abs() < 1e-10);
    }

    #[test]
    fn value_at_one() {
        assert!((airy_ai(1.0).unwrap() - 0.135_292_416_3).abs() < 1e-10);
    }

    #[test]
    fn agrees_with_contour_integral() {
        let mut z = -10.0;
        while z <= 10.0 {
            let a = airy_ai(z).unwrap();
            let o = contour_oracle(z);
            assert!((a - o).abs() < 1e-12, "z={z}: {a} vs {o}");
            z += 0.37;
        }
        for &z in &[-30.0, -20.0, -12.5, -11.9, 0.99, 1.01, 1.5, 15.0] {
            let a = airy_ai(z).unwrap();
            let o = contour_oracle(z);
            assert!((a - o).abs() < 1e-12 * (1.0 + a.abs()), "z={z}: {a} vs {o}");
        }
    }

    #[test]
    fn first_zero() {
        let (mut lo, mut hi) = (-2.5, -2.2);
        assert!(airy_ai(lo).unwrap() * airy_ai(hi).unwrap() < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if airy_ai(mid).unwrap() > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo + 2.338_107_410_459_767).abs() < 1e-12);
    }

    #[test]
    fn satisfies_the_airy_equation() {
        let h = 1e-4;
        for i in -5..=5 {
            let z = i as f64;
            let f = |x: f64| airy_ai(x).unwrap();
            // Differencing Ai' keeps the roundoff near eps/h.
            let g = |x: f64| airy_ai_pair(x).1;
            let d2 = (g(z - 2.0 * h) - 8.0 * g(z - h) + 8.0 * g(z + h) - g(z + 2.0 * h)) / (12.0 * h);
            assert!((d2 - z * f(z)).abs() < 1e-8, "z={z} residual {}", d2 - z * f(z));
        }
    }

    #[test]
    fn derivative_is_consistent() {
        for &z in &[-14.0, -12.0, -7.3, -1.0, 0.5, 1.0, 1.0001, 4.0] {
            let h = 1e-5;
            let fd = (airy_ai_pair(z + h).0 - airy_ai_pair(z - h).0) / (2.0 * h);
            let d = airy_ai_pair(z).1;
            assert!((fd - d).abs() < 1e-8 * (1.0 + d.abs()), "z={z}: {fd} vs {d}");
        }
    }

    #[test]
    fn scaled_matches_unscaled() {
        for &z in &[0.3, 1.0, 2.0, 9.0] {
            let (a, d, zeta) = airy_ai_scaled(z);
            let (a0, d0) = airy_ai_pair(z);
            assert!((a * (-zeta).exp() - a0).abs() < 1e-15);
            assert!((d * (-zeta).exp() - d0).abs() < 1e-15);
        }
        let (a, _, _) = airy_ai_scaled(400.0);
        assert!(a.is_finite() && a > 0.0);
    }

    #[test]
    fn range_errors() {
        assert!(airy_ai(50.5).is_err());
        assert!(airy_ai(-51.0).is_err());
        assert!(airy_ai(f64::NAN).is_err());
        assert!(airy_ai(50.0).is_ok());
    }
}
