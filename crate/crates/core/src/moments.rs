use serde::{Deserialize, Serialize};

use crate::momentum::MomentumDistribution;

/// Means and central moments of `x` and `p` in lab coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub m3_x: f64,
    pub m3_p: f64,
    pub m4_x: f64,
    pub m4_p: f64,
}

impl MomentRecord {
    pub fn from_marginals(x: &MomentumDistribution, p: &MomentumDistribution) -> Self {
        Self {
            mean_x: x.mean(),
            mean_p: p.mean(),
            var_x: x.central_moment(2),
            var_p: p.central_moment(2),
            m3_x: x.central_moment(3),
            m3_p: p.central_moment(3),
            m4_x: x.central_moment(4),
            m4_p: p.central_moment(4),
        }
    }

    pub fn as_array(&self) -> [f64; 8] {
        [
            self.mean_x, self.mean_p, self.var_x, self.var_p, self.m3_x, self.m3_p, self.m4_x, self.m4_p,
        ]
    }

    /// Worst relative mismatch over the second and fourth central moments
    /// and the `p` mean (measured against `|reference|`, or absolute when the
    /// reference vanishes). The third moments and the vanishing `x` mean are
    /// excluded; the third differs between quantum and classical by design.
    pub fn max_relative_error(&self, reference: &MomentRecord) -> f64 {
        let pairs = [
            (self.var_x, reference.var_x),
            (self.var_p, reference.var_p),
            (self.m4_x, reference.m4_x),
            (self.m4_p, reference.m4_p),
        ];
        let mut worst = pairs
            .iter()
            .map(|&(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        let scale = reference.var_p.sqrt();
        worst = worst.max(((self.mean_p - reference.mean_p) / reference.mean_p.abs().max(scale)).abs());
        worst.max((self.mean_x - reference.mean_x).abs() / reference.var_x.sqrt())
    }
}

/// Moments of a phase-space field; see [`crate::field::PhaseSpaceField::moments`].
pub fn measure_central_moments(field: &crate::field::PhaseSpaceField) -> MomentRecord {
    field.moments()
}
