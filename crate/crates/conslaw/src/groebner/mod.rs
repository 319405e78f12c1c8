//! Gröbner bases of ideals and submodules, syzygy modules, parameter
//! elimination and degree-truncated syzygy spaces.

pub mod buchberger;
pub mod eliminate;
pub mod module;
pub mod span;
pub mod syzygy;

pub use buchberger::{
    buchberger, buchberger_with_cofactors, divide, divide_with, module_gb, module_normal_form, normal_form, GbHook,
    NoHook,
};
pub use eliminate::{eliminate_params, unconditional_syzygies};
pub use module::{ModVec, ModuleOrder, Position};
pub use span::{truncated_span, DegreeConvention, VectorSpaceBasis};
pub use syzygy::{
    conversion, conversion_with, convert_syzygies, module_basis, same_module, schreyer, schreyer_with, syzygy_basis,
    Conversion, SyzygyBasis,
};

use thiserror::Error;

/// Errors raised by the Gröbner layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("degree bound must be non-negative, got {0}")]
    NegativeDegree(i64),
}
