//! Independent, slower solvers used to validate the spectral evolver.

mod langevin;
mod lindblad;
mod schrodinger;

pub use langevin::{coarse_grain, langevin_sample, TrajectoryEnsemble, RUNAWAY};
pub use lindblad::{lindblad_dm_evolve, DensityMatrixField, HERMITICITY_TOLERANCE, TRACE_TOLERANCE};
pub use schrodinger::{schrodinger_closed, WavefunctionField};
