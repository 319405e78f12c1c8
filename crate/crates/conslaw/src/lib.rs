//! Polynomial conservation laws of parametric ODE systems.

pub mod algebra;
pub mod cgs;
pub mod groebner;
pub mod linear_laws;
pub mod model_io;
pub mod models;
pub mod monomial_laws;
pub mod parametric;
pub mod syzygy_laws;
