//! Special functions and quadrature used by the closed-form evaluators.

mod airy;
mod pcf;
pub mod quadrature;

pub use airy::{airy_ai, airy_ai_pair, airy_ai_scaled, AIRY_MAX_ARG};
pub use pcf::{parabolic_cylinder_d, parabolic_cylinder_d_weighted};
pub use quadrature::{adaptive_integral, Domain, QuadResult, QuadratureSpec, Substitution};
pub use statrs::function::erf::{erf, erfc};
pub use statrs::function::gamma::{gamma, ln_gamma};
