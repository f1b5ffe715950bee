use serde::{Deserialize, Serialize};

/// Diagonal symplectic map `x = e^a u`, `p = e^{-a} v`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AffineFrame {
    pub a: f64,
}

impl AffineFrame {
    pub const IDENTITY: AffineFrame = AffineFrame { a: 0.0 };

    pub fn new(a: f64) -> Self {
        Self { a }
    }

    pub fn s_x(&self) -> f64 {
        self.a.exp()
    }

    pub fn s_p(&self) -> f64 {
        (-self.a).exp()
    }

    pub fn compose(self, other: AffineFrame) -> AffineFrame {
        AffineFrame { a: self.a + other.a }
    }

    pub fn to_lab(&self, u: f64, v: f64) -> (f64, f64) {
        (self.s_x() * u, self.s_p() * v)
    }

    pub fn from_lab(&self, x: f64, p: f64) -> (f64, f64) {
        (x / self.s_x(), p / self.s_p())
    }
}

/// Absorbs a stretch increment `int chi_1` (sign +1) or `int chi_3` (sign -1).
pub fn linear_frame_substep(frame: AffineFrame, increment: f64) -> AffineFrame {
    frame.compose(AffineFrame::new(increment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::Schedule;

    #[test]
    fn symplectic() {
        for &a in &[-7.3, -1.0, 0.0, 0.4, 11.0] {
            let f = AffineFrame::new(a);
            assert!((f.s_x() * f.s_p() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn composition_adds_log_scales() {
        let f = AffineFrame::new(0.3).compose(AffineFrame::new(-1.1));
        assert!((f.a + 0.8).abs() < 1e-15);
        let (x, p) = f.to_lab(2.0, 3.0);
        let (u, v) = f.from_lab(x, p);
        assert!((u - 2.0).abs() < 1e-15 && (v - 3.0).abs() < 1e-15);
    }

    #[test]
    fn substeps_follow_the_schedule() {
        let h: f64 = 1e-3;
        let s = Schedule::standard(h).unwrap();
        let t = s.checkpoints();
        let f0 = AffineFrame::IDENTITY;
        assert_eq!(linear_frame_substep(f0, 0.0), f0);
        let f1 = linear_frame_substep(f0, s.chi_integral(0, t[0], t[1]));
        assert!((f1.s_x() - h.powf(-1.0 / 6.0)).abs() < 1e-12);
        let f3 = linear_frame_substep(f1, -s.chi_integral(2, t[2], t[3]));
        assert!((f3.a + 0.5 * (1.0 / h).ln()).abs() < 1e-12);
    }
}
