//! Parabolic cylinder function `D_nu(z)` for `nu < 0` from the integral
//!
//! `D_nu(z) = exp(-z^2/4) / Gamma(-nu) * int_0^inf exp(-z s - s^2/2) s^(-nu-1) ds`.
//!
//! The substitution `s = u^m`, `m = -1/nu`, turns the integrand into the
//! smooth `m exp(-z u^m - u^{2m}/2)`. For negative `z` the exponent is
//! completed to `z^2/2 - (s + z)^2/2` so the peak is handled without overflow.

use crate::error::{Error, Result};
use crate::specialfn::{adaptive_integral, ln_gamma, Domain, QuadratureSpec};

fn spec() -> QuadratureSpec {
    QuadratureSpec::with_tolerances(1e-300, 1e-13)
}

/// `exp(log_weight) * D_nu(z)`, evaluated so that large cancelling
/// exponentials never materialise.
pub fn parabolic_cylinder_d_weighted(nu: f64, z: f64, log_weight: f64) -> Result<f64> {
    if !(nu < 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "parabolic cylinder integral needs nu < 0, got {nu}"
        )));
    }
    if !z.is_finite() {
        return Err(Error::Range {
            what: "parabolic cylinder argument must be finite",
            value: z,
        });
    }
    let m = -1.0 / nu;
    let (integral, log_scale) = if z >= 0.0 {
        // Bulk of the integrand sits at u ~ min(1, z^{-1/m}).
        let split = 8.0 * if z > 1.0 { z.powf(-1.0 / m) } else { 1.0 };
        let f = |u: f64| {
            let s = u.powf(m);
            m * (-z * s - 0.5 * s * s).exp()
        };
        let a = adaptive_integral(f, Domain::Finite(0.0, split), &spec())?;
        let b = adaptive_integral(f, Domain::UpperInfinite(split), &spec())?;
        (a.value + b.value, -0.25 * z * z)
    } else {
        let peak = (-z).powf(1.0 / m);
        let f = |u: f64| {
            let s = u.powf(m);
            let d = s + z;
            m * (-0.5 * d * d).exp()
        };
        let a = adaptive_integral(f, Domain::Finite(0.0, peak), &spec())?;
        let b = adaptive_integral(f, Domain::UpperInfinite(peak), &spec())?;
        (a.value + b.value, 0.25 * z * z)
    };
    Ok(integral * (log_weight + log_scale - ln_gamma(-nu)).exp())
}

/// `D_nu(z)` for `nu < 0`.
pub fn parabolic_cylinder_d(nu: f64, z: f64) -> Result<f64> {
    parabolic_cylinder_d_weighted(nu, z, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{gamma, Substitution};
    use std::f64::consts::PI;

    // Direct representation in the original variable with the sqrt map, for
    // a second independent evaluation at nu = -1/2.
    fn raw(z: f64, c: f64) -> f64 {
        // s = c w rescales the integral without changing its value.
        let spec = QuadratureSpec::with_tolerances(1e-300, 1e-13)
            .with_substitution(Substitution::SqrtLower);
        let r = adaptive_integral(
            |w: f64| {
                let s = c * w;
                c * (-z * s - 0.5 * s * s).exp() / s.sqrt()
            },
            Domain::UpperInfinite(0.0),
            &spec,
        )
        .unwrap();
        (-0.25 * z * z).exp() * r.value / PI.sqrt()
    }

    #[test]
    fn value_at_origin() {
        let exact = 2f64.powf(-0.75) * gamma(0.25) / PI.sqrt();
        let d = parabolic_cylinder_d(-0.5, 0.0).unwrap();
        assert!((d - exact).abs() < 1e-12 * exact);
        assert!((d - 1.216_280).abs() < 1e-6);
    }

    #[test]
    fn leading_asymptotics() {
        let z: f64 = 20.0;
        let d = parabolic_cylinder_d(-0.5, z).unwrap();
        let ratio = d * (0.25 * z * z).exp() * z.sqrt();
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn rescaled_quadrature_agrees() {
        for &z in &[-6.0, -2.0, -0.3, 0.0, 0.7, 3.0, 8.0] {
            let d = parabolic_cylinder_d(-0.5, z).unwrap();
            for &c in &[0.5, 2.0] {
                let o = raw(z, c);
                assert!((d - o).abs() < 1e-10 * d.abs().max(1e-300), "z={z} c={c}");
            }
        }
    }

    #[test]
    fn relative_accuracy_over_range() {
        for i in -20..=20 {
            let z = i as f64;
            let d = parabolic_cylinder_d(-0.5, z).unwrap();
            let o = raw(z, 1.0);
            assert!(((d - o) / o).abs() < 1e-10, "z={z}: {d} vs {o}");
        }
    }

    #[test]
    fn integer_order_matches_erfc_form() {
        // D_{-1}(z) = exp(z^2/4) sqrt(pi/2) erfc(z / sqrt 2)
        for &z in &[-3.0, 0.0, 1.5, 4.0] {
            let d = parabolic_cylinder_d(-1.0, z).unwrap();
            let e = (0.25 * z * z).exp() * (PI / 2.0).sqrt() * crate::specialfn::erfc(z / 2f64.sqrt());
            assert!(((d - e) / e).abs() < 1e-10, "z={z}");
        }
    }

    #[test]
    fn weighted_avoids_overflow() {
        let z = -60.0;
        let w = parabolic_cylinder_d_weighted(-0.5, z, -0.25 * z * z).unwrap();
        assert!(w.is_finite() && w > 0.0);
    }

    #[test]
    fn nonnegative_order_is_a_domain_error() {
        assert!(matches!(parabolic_cylinder_d(0.5, 1.0), Err(Error::Domain(_))));
        assert!(parabolic_cylinder_d(0.0, 1.0).is_err());
    }
}
