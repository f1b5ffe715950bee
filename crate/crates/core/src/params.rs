use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant, its half `h = hbar / 2`, and the diffusion rate `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalParams {
    hbar: f64,
    h: f64,
    d: f64,
}

impl SemiclassicalParams {
    pub fn new(hbar: f64, d: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::InvalidParameter(format!("D must be nonnegative, got {d}")));
        }
        Ok(Self { hbar, h: 0.5 * hbar, d })
    }

    pub fn from_h(h: f64, d: f64) -> Result<Self> {
        Self::new(2.0 * h, d)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn diffusion(&self) -> f64 {
        self.d
    }

    pub fn with_diffusion(self, d: f64) -> Result<Self> {
        Self::new(self.hbar, d)
    }

    /// `hbar / sqrt(D)`.
    pub fn decoherence_length(&self) -> Result<f64> {
        if self.d == 0.0 {
            return Err(Error::Undefined("decoherence length is infinite at D = 0"));
        }
        Ok(self.hbar / self.d.sqrt())
    }
}
