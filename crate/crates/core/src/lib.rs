//! Quantum-classical correspondence under a cubic kick with weak diffusion.

pub mod closedform;
pub mod error;
pub mod evolver;
pub mod field;
pub mod figures;
pub mod fourier;
pub mod frame;
pub mod grid;
pub mod io;
pub mod moments;
pub mod oracles;
pub mod momentum;
pub mod params;
pub mod schedule;
pub mod specialfn;
pub mod sweep;

pub use error::{Error, Result};
