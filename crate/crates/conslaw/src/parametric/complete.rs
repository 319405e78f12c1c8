//! Completeness and independence of a set of conservation laws.

use crate::algebra::{Poly, SymbolTable, Q};

use super::decide::{decide, Formula, Verdict};
use super::rank::{parametric_rank, RankDecomposition};
use super::{jacobian, Constraint, Sign, SignContext};

/// Rank decomposition, the selected full-rank condition and the verdict.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub matrix: Vec<Vec<Poly<Q>>>,
    pub decomposition: RankDecomposition,
    /// Disjunction of the cases with the required rank.
    pub rho: Vec<Constraint>,
    pub formula: Formula,
    pub verdict: Verdict,
}

fn check(symbols: &SymbolTable, f: &[Poly<Q>], matrix: Vec<Vec<Poly<Q>>>, target: usize, budget: usize) -> CheckReport {
    let nsym = symbols.len();
    let decomposition = parametric_rank(&matrix, &SignContext::free(nsym));
    let rho = decomposition.disjunction_for(target);
    let ctx = SignContext::model(symbols.r(), symbols.n(), Sign::Positive);
    let formula = Formula::new(symbols.clone(), ctx, f.to_vec(), rho.clone());
    let verdict = decide(&formula, budget);
    CheckReport { matrix, decomposition, rho, formula, verdict }
}

/// Tests whether the stacked Jacobian of `(F, Φ)` has rank `n` at every
/// positive steady state.
pub fn is_complete(symbols: &SymbolTable, f: &[Poly<Q>], phi: &[Poly<Q>], budget: usize) -> CheckReport {
    let (r, n) = (symbols.r(), symbols.n());
    let mut rows = jacobian(f, r, n);
    rows.extend(jacobian(phi, r, n));
    check(symbols, f, rows, n, budget)
}

/// Tests whether the Jacobian of `Φ` has rank `|Φ|` at every positive
/// steady state.
pub fn is_independent(symbols: &SymbolTable, f: &[Poly<Q>], phi: &[Poly<Q>], budget: usize) -> CheckReport {
    let (r, n) = (symbols.r(), symbols.n());
    check(symbols, f, jacobian(phi, r, n), phi.len(), budget)
}
