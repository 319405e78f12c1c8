//! Degree-truncated vector-space bases of syzygy modules.

use std::collections::BTreeMap;

use crate::algebra::linalg::{Echelon, Insert};
use crate::algebra::{Field, Mon, TermOrder};

use super::module::{ModVec, ModuleOrder};
use super::syzygy::module_basis;
use super::GroebnerError;

/// How the degree bound `d` is applied to products `u·g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeConvention {
    /// `deg(u·g) ≤ d`.
    Product,
    /// `deg(u) ≤ d`.
    Multiplier,
}

impl DegreeConvention {
    /// Bound on syzygy degree that yields conservation laws of degree `d`.
    pub fn syzygy_bound(self, law_degree: i64) -> i64 {
        law_degree - 1
    }
}

/// Linearly independent products `u·g_i` spanning the truncated space.
#[derive(Clone, Debug)]
pub struct VectorSpaceBasis<C: Field> {
    pub elements: Vec<ModVec<C>>,
    pub degree_bound: i64,
    pub convention: DegreeConvention,
}

/// Sparse coefficient vector keyed by `(position, monomial)`.
pub fn to_sparse<C: Field>(v: &ModVec<C>) -> BTreeMap<(usize, Mon), C> {
    let mut out = BTreeMap::new();
    for (i, p) in v.0.iter().enumerate() {
        for (m, c) in p.terms() {
            out.insert((i, m.clone()), c.clone());
        }
    }
    out
}

/// Multiplies the generators (recomputed as a Gröbner basis under
/// term-over-position with the degree-compatible `order`) by every monomial
/// allowed by `convention` and keeps a linearly independent subset.
pub fn truncated_span<C: Field>(
    gens: &[ModVec<C>],
    d: i64,
    convention: DegreeConvention,
    order: &TermOrder,
) -> Result<VectorSpaceBasis<C>, GroebnerError> {
    if d < 0 {
        return Err(GroebnerError::NegativeDegree(d));
    }
    let gb = module_basis(gens, &ModuleOrder::top(*order));
    let nvars = gb.first().map_or(0, |g| g.nvars());
    let mons = Mon::all_up_to_degree(nvars, d);
    let mut ech: Echelon<(usize, Mon), C> = Echelon::new(false);
    let mut elements = Vec::new();
    let one = C::one();
    for g in &gb {
        let dg = g.degree();
        for u in &mons {
            if convention == DegreeConvention::Product && u.degree() + dg > d {
                break;
            }
            let prod = g.mul_term(u, &one);
            if let Insert::Independent(_) = ech.insert(to_sparse(&prod)) {
                elements.push(prod);
            }
        }
    }
    Ok(VectorSpaceBasis { elements, degree_bound: d, convention })
}

/// Dimension of the span of `vs` by exact elimination.
pub fn span_dimension<C: Field>(vs: &[ModVec<C>]) -> usize {
    let mut ech: Echelon<(usize, Mon), C> = Echelon::new(false);
    for v in vs {
        ech.insert(to_sparse(v));
    }
    ech.dim()
}
