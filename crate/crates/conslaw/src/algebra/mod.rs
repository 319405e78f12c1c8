//! Exact polynomial arithmetic over the rationals and over rational
//! functions in the parameters.

pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod ratfun;
pub mod rational;

pub use monomial::{Mon, TermOrder};
pub use poly::{arith, ArithOp, Poly, NEG_INF_DEGREE};
pub use ratfun::{poly_gcd, RatFun};
pub use rational::{q, qf, Field, Q};

use thiserror::Error;

/// Errors raised by the algebra layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("symbol table mismatch: {0} vs {1} symbols")]
    SymbolMismatch(usize, usize),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("negative exponent in an ordering context")]
    NegativeExponent,
}

/// Ordered symbol names: the parameter block `k` followed by the variable
/// block `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    params: Vec<String>,
    vars: Vec<String>,
}

impl SymbolTable {
    /// Creates a table; fails when a name repeats across the two blocks.
    pub fn new(params: Vec<String>, vars: Vec<String>) -> Result<Self, String> {
        let mut seen = std::collections::HashSet::new();
        for n in params.iter().chain(vars.iter()) {
            if !seen.insert(n.clone()) {
                return Err(n.clone());
            }
        }
        Ok(SymbolTable { params, vars })
    }

    /// Convenience constructor for tests and bundled examples.
    pub fn from_strs(params: &[&str], vars: &[&str]) -> Self {
        Self::new(params.iter().map(|s| s.to_string()).collect(), vars.iter().map(|s| s.to_string()).collect())
            .expect("distinct symbol names")
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of parameters `r`.
    pub fn r(&self) -> usize {
        self.params.len()
    }

    /// Number of variables `n`.
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Total number of symbols `r + n`.
    pub fn len(&self) -> usize {
        self.params.len() + self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All names, parameters first.
    pub fn names(&self) -> Vec<String> {
        self.params.iter().chain(self.vars.iter()).cloned().collect()
    }

    /// Global index of a symbol name.
    pub fn index(&self, name: &str) -> Option<usize> {
        self.params
            .iter()
            .position(|n| n == name)
            .or_else(|| self.vars.iter().position(|n| n == name).map(|i| i + self.params.len()))
    }

    /// Global index of variable `i`.
    pub fn var_index(&self, i: usize) -> usize {
        self.params.len() + i
    }

    pub fn is_param(&self, idx: usize) -> bool {
        idx < self.params.len()
    }

    /// Parameter-only table (used for the coefficient field `Q(k)`).
    pub fn param_table(&self) -> SymbolTable {
        SymbolTable { params: self.params.clone(), vars: Vec::new() }
    }

    /// Variable-only table.
    pub fn var_table(&self) -> SymbolTable {
        SymbolTable { params: Vec::new(), vars: self.vars.clone() }
    }
}
