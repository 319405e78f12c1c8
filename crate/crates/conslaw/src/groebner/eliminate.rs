//! Parameter elimination: syzygies that hold for every parameter value.

use crate::algebra::{Poly, TermOrder, Q};

use super::module::{ModVec, ModuleOrder};
use super::syzygy::{module_basis, syzygy_basis, SyzygyBasis};

/// Keeps the parameter-free part `Syz(F) ∩ Q[x]^m` of a syzygy module over
/// `Q[k, x]` (parameters are the first `nparams` symbols). The generators are
/// recomputed as a module Gröbner basis under term-over-position with the
/// block order `k > x`, whose parameter-free elements generate the
/// intersection.
pub fn eliminate_params(s: &SyzygyBasis<Q>, nparams: usize) -> SyzygyBasis<Q> {
    let mo = ModuleOrder::top(TermOrder::params_above(nparams));
    let gb = module_basis(&s.generators, &mo);
    let generators = gb.into_iter().filter(|g| !uses_params(g, nparams)).collect();
    SyzygyBasis { generators, basis_of: s.basis_of.clone(), order: mo }
}

/// Syzygies of `F ⊂ Q[k, x]` that are free of parameters.
pub fn unconditional_syzygies(f: &[Poly<Q>], nparams: usize) -> SyzygyBasis<Q> {
    let nvars = f.first().map_or(nparams, |p| p.nvars());
    let s = syzygy_basis(f, nvars, &TermOrder::params_above(nparams));
    eliminate_params(&s, nparams)
}

fn uses_params(g: &ModVec<Q>, nparams: usize) -> bool {
    g.0.iter().any(|p| (0..nparams).any(|k| p.uses_var(k)))
}
