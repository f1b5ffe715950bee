//! Three-stage stretch / kick / squeeze schedule built from bump windows.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfn::{adaptive_integral, Domain, QuadratureSpec};

/// Shape of the switching window on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum BumpShape {
    /// `exp(1 / (4 s (s - 1)))`
    #[default]
    Smooth,
    /// `1 - cos(2 pi s)`
    RaisedCosine,
}

impl BumpShape {
    fn raw(self, s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        match self {
            BumpShape::Smooth => (0.25 / (s * (s - 1.0))).exp(),
            BumpShape::RaisedCosine => 1.0 - (2.0 * std::f64::consts::PI * s).cos(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BumpShape::Smooth => "smooth",
            BumpShape::RaisedCosine => "raised-cosine",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "smooth" => Ok(BumpShape::Smooth),
            "raised-cosine" => Ok(BumpShape::RaisedCosine),
            other => Err(Error::InvalidParameter(format!("unknown bump shape `{other}`"))),
        }
    }
}

const PANELS: usize = 2048;

// Gauss-Legendre 10-point nodes and weights on [-1, 1].
const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_1,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

fn gl10<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut s = 0.0;
    for k in 0..5 {
        s += GL_W[k] * (f(c - r * GL_X[k]) + f(c + r * GL_X[k]));
    }
    s * r
}

struct BumpTable {
    z: f64,
    cumulative: Vec<f64>,
}

/// Normalised bump `chi(s)` with unit integral, and its running integral.
#[derive(Clone)]
pub struct BumpProfile {
    shape: BumpShape,
    table: Arc<OnceLock<BumpTable>>,
}

impl std::fmt::Debug for BumpProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BumpProfile").field("shape", &self.shape).finish()
    }
}

impl PartialEq for BumpProfile {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
    }
}

impl Default for BumpProfile {
    fn default() -> Self {
        Self::new(BumpShape::Smooth)
    }
}

impl BumpProfile {
    pub fn new(shape: BumpShape) -> Self {
        Self {
            shape,
            table: Arc::new(OnceLock::new()),
        }
    }

    pub fn shape(&self) -> BumpShape {
        self.shape
    }

    fn table(&self) -> &BumpTable {
        self.table.get_or_init(|| {
            let shape = self.shape;
            let mut cumulative = Vec::with_capacity(PANELS + 1);
            cumulative.push(0.0);
            let mut acc = 0.0;
            for i in 0..PANELS {
                let a = i as f64 / PANELS as f64;
                let b = (i + 1) as f64 / PANELS as f64;
                acc += gl10(|s| shape.raw(s), a, b);
                cumulative.push(acc);
            }
            let z = acc;
            for c in cumulative.iter_mut() {
                *c /= z;
            }
            BumpTable { z, cumulative }
        })
    }

    /// Integral of the unnormalised shape over `(0, 1)`.
    pub fn normalization(&self) -> f64 {
        self.table().z
    }

    /// Normalised `chi(s)`; zero outside `(0, 1)`.
    pub fn value(&self, s: f64) -> f64 {
        self.shape.raw(s) / self.normalization()
    }

    /// `int_0^s chi`, clamped to `[0, 1]`.
    pub fn cumulative(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return 1.0;
        }
        let t = self.table();
        let x = s * PANELS as f64;
        let i = (x.floor() as usize).min(PANELS - 1);
        let a = i as f64 / PANELS as f64;
        let shape = self.shape;
        t.cumulative[i] + gl10(|r| shape.raw(r), a, s) / t.z
    }
}

/// Free function form of [`BumpProfile::value`].
pub fn bump_value(profile: &BumpProfile, s: f64) -> f64 {
    profile.value(s)
}

/// Durations, couplings and bump of the three-step protocol.
///
/// Step `i` runs on `[t_{i-1}, t_i]` with generator strength
/// `coupling[i] * chi((t - t_{i-1}) / tau_i)`. The standard protocol has all
/// couplings equal to one; zero couplings switch a step off while keeping its
/// duration (used for free-diffusion checks).
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    tau: [f64; 3],
    coupling: [f64; 3],
    bump: BumpProfile,
}

impl Schedule {
    pub fn new(tau1: f64, tau2: f64, tau3: f64) -> Result<Self> {
        for (i, t) in [tau1, tau2, tau3].into_iter().enumerate() {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "tau{} must be finite and nonnegative, got {t}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            tau: [tau1, tau2, tau3],
            coupling: [1.0; 3],
            bump: BumpProfile::default(),
        })
    }

    /// `tau1 = log(1/h)/6`, `tau2 = 1`, `tau3 = 2 log(1/h)/3`.
    pub fn standard(h: f64) -> Result<Self> {
        Self::standard_with_tau2(h, 1.0)
    }

    pub fn standard_with_tau2(h: f64, tau2: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidParameter(format!("standard schedule needs 0 < h < 1, got {h}")));
        }
        let l = (1.0 / h).ln();
        Self::new(l / 6.0, tau2, 2.0 * l / 3.0)
    }

    pub fn with_bump(mut self, bump: BumpProfile) -> Self {
        self.bump = bump;
        self
    }

    pub fn with_couplings(mut self, coupling: [f64; 3]) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn tau(&self) -> [f64; 3] {
        self.tau
    }

    pub fn couplings(&self) -> [f64; 3] {
        self.coupling
    }

    pub fn bump(&self) -> &BumpProfile {
        &self.bump
    }

    pub fn total_time(&self) -> f64 {
        self.tau.iter().sum()
    }

    /// `[t0, t1, t2, t3]`.
    pub fn checkpoints(&self) -> [f64; 4] {
        let [a, b, c] = self.tau;
        [0.0, a, a + b, a + b + c]
    }

    /// The technical assumption `tau1 < log(1/h) / 4`.
    pub fn technical_ok(&self, h: f64) -> bool {
        h > 0.0 && h < 1.0 && self.tau[0] < 0.25 * (1.0 / h).ln()
    }

    /// `tau` coincides with the standard choice for this `h` (to 1e-12).
    pub fn is_standard(&self, h: f64) -> bool {
        match Self::standard_with_tau2(h, self.tau[1]) {
            Ok(s) => {
                (s.tau[0] - self.tau[0]).abs() < 1e-12
                    && (s.tau[2] - self.tau[2]).abs() < 1e-12
                    && self.coupling == [1.0; 3]
            }
            Err(_) => false,
        }
    }

    /// Generator strength of step `step` (0-based) at time `t`.
    pub fn chi(&self, step: usize, t: f64) -> f64 {
        let tau = self.tau[step];
        if tau == 0.0 {
            return 0.0;
        }
        let t0 = self.checkpoints()[step];
        self.coupling[step] * self.bump.value((t - t0) / tau)
    }

    /// `int_{ta}^{tb} chi_step(t) dt`.
    pub fn chi_integral(&self, step: usize, ta: f64, tb: f64) -> f64 {
        let tau = self.tau[step];
        if tau == 0.0 {
            return 0.0;
        }
        let t0 = self.checkpoints()[step];
        let x = |t: f64| self.bump.cumulative((t - t0) / tau);
        self.coupling[step] * tau * (x(tb) - x(ta))
    }

    /// Frame log-scale `a(t) = int_0^t (chi_1 - chi_3)`.
    pub fn frame_log_scale(&self, t: f64) -> f64 {
        self.chi_integral(0, 0.0, t) - self.chi_integral(2, 0.0, t)
    }

    /// `int_{ta}^{tb} exp(sign * 2 a(t)) dt`.
    pub fn frame_weight_integral(&self, sign: f64, ta: f64, tb: f64) -> Result<f64> {
        if tb <= ta {
            return Ok(0.0);
        }
        let spec = QuadratureSpec::with_tolerances(1e-300, 1e-12);
        Ok(adaptive_integral(
            |t| (sign * 2.0 * self.frame_log_scale(t)).exp(),
            Domain::Finite(ta, tb),
            &spec,
        )?
        .value)
    }
}
