//! Linear conservation laws from the left kernel of the stoichiometric
//! matrix, semi-positive bases and sufficient completeness conditions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::linalg::{integer_left_kernel, rank};
use crate::algebra::{Mon, Poly, TermOrder, Q};
use crate::model_io::CrnForm;
use crate::parametric::{jacobian, parametric_rank, Constraint, Formula, SignContext};

/// Integer coefficient vector `c` of the law `Σ c_i x_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearLaw {
    pub coeffs: Vec<BigInt>,
}

impl LinearLaw {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        LinearLaw { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        LinearLaw { coeffs: c.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// `Σ c_i x_i` over a symbol table with `r` leading parameters.
    pub fn to_poly(&self, r: usize) -> Poly<Q> {
        let n = self.coeffs.len();
        let mut p = Poly::zero(r + n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(Mon::var(r + n, r + i), Q::from_integer(c.clone()));
            }
        }
        p
    }

    /// Entries of `c·S`.
    pub fn times(&self, s: &[Vec<i64>]) -> Vec<BigInt> {
        let cols = s.first().map_or(0, |r| r.len());
        (0..cols).map(|j| self.coeffs.iter().zip(s).map(|(c, row)| c * BigInt::from(row[j])).sum()).collect()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
    }
}

/// Basis of the left kernel of `S` as primitive integer rows in reduced
/// echelon form (pivot entries positive). Each pivot column occurs in exactly
/// one row, so no row's support contains another's.
pub fn linear_basis(c: &CrnForm) -> Vec<LinearLaw> {
    integer_left_kernel(&c.stoich, c.n(), c.reactions()).into_iter().map(LinearLaw::new).collect()
}

/// Rank of the stoichiometric matrix over `Q`.
pub fn stoich_rank(c: &CrnForm) -> usize {
    rank(&crate::algebra::linalg::int_to_q(&c.stoich))
}

pub fn is_semipositive(law: &LinearLaw) -> bool {
    law.coeffs.iter().all(|c| !c.is_negative())
}

/// Semi-positive basis of the span of `laws`, chosen among the extreme rays
/// of `span ∩ R^n_{≥0}` (smallest supports first). `None` when these rays do
/// not span the whole space.
pub fn semipositive_basis(laws: &[LinearLaw]) -> Option<Vec<LinearLaw>> {
    if laws.is_empty() {
        return Some(Vec::new());
    }
    let mut rays = extreme_rays(laws);
    rays.sort_by(|a, b| a.support().len().cmp(&b.support().len()).then_with(|| b.coeffs.cmp(&a.coeffs)));
    let mut chosen: Vec<LinearLaw> = Vec::new();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for ray in rays {
        let mut trial = rows.clone();
        trial.push(ray.coeffs.iter().map(|c| Q::from_integer(c.clone())).collect());
        if rank(&trial) > rows.len() {
            rows = trial;
            chosen.push(ray);
        }
    }
    (chosen.len() == laws.len()).then_some(chosen)
}

/// Extreme rays of the cone `span(laws) ∩ R^n_{≥0}` by the double
/// description method, as primitive integer vectors.
pub fn extreme_rays(laws: &[LinearLaw]) -> Vec<LinearLaw> {
    let n = laws[0].coeffs.len();
    let mut basis: Vec<Vec<Q>> =
        laws.iter().map(|l| l.coeffs.iter().map(|c| Q::from_integer(c.clone())).collect()).collect();
    let pivots = crate::algebra::linalg::rref(&mut basis);
    let k = pivots.len();
    // start from the simplicial cone cut out by the pivot coordinates
    let mut rays: Vec<Vec<Q>> = basis.into_iter().take(k).collect();
    let mut processed: Vec<usize> = pivots.clone();
    let zero_set =
        |r: &Vec<Q>, done: &[usize]| -> BTreeSet<usize> { done.iter().copied().filter(|&i| r[i].is_zero()).collect() };
    for i in (0..n).filter(|i| !pivots.contains(i)) {
        let (mut pos, mut neg, mut zer) = (Vec::new(), Vec::new(), Vec::new());
        for r in &rays {
            if r[i].is_positive() {
                pos.push(r.clone());
            } else if r[i].is_negative() {
                neg.push(r.clone());
            } else {
                zer.push(r.clone());
            }
        }
        let zsets: Vec<BTreeSet<usize>> = rays.iter().map(|r| zero_set(r, &processed)).collect();
        let mut next: Vec<Vec<Q>> = pos.iter().chain(&zer).cloned().collect();
        for p in &pos {
            let zp = zero_set(p, &processed);
            for m in &neg {
                let zm = zero_set(m, &processed);
                let common: BTreeSet<usize> = zp.intersection(&zm).copied().collect();
                if common.len() + 2 < k {
                    continue;
                }
                let adjacent =
                    rays.iter().zip(&zsets).filter(|(r, _)| *r != p && *r != m).all(|(_, z)| !common.is_subset(z));
                if adjacent {
                    let a = &p[i];
                    let b = -&m[i];
                    next.push(p.iter().zip(m).map(|(x, y)| x * &b + y * a).collect());
                }
            }
        }
        processed.push(i);
        rays = next;
    }
    let mut out: Vec<LinearLaw> =
        rays.iter().filter_map(|r| crate::algebra::rational::primitive_integer_vector(r)).map(LinearLaw::new).collect();
    out.sort();
    out.dedup();
    out
}

/// Sufficient conditions for the kernel rows to form a complete set: (i) the
/// Jacobian has the rank of `S`, (ii) no row of `J·S` vanishes, both on
/// `{k > 0, x ≥ 0, F = 0}`.
#[derive(Clone, Debug)]
pub struct CompletenessConditions {
    pub rank_condition: Formula,
    /// One formula per row `i` of `J·S`.
    pub row_conditions: Vec<Formula>,
    pub stoich_rank: usize,
}

/// Builds the two conditions for a reaction-network form. Variables are
/// taken non-negative so that boundary steady states count.
pub fn completeness_conditions(c: &CrnForm) -> CompletenessConditions {
    let f = c.reconstruct();
    let (r, n) = (c.symbols.r(), c.n());
    let nsym = r + n;
    let ctx = SignContext::model(r, n, crate::parametric::Sign::NonNegative);
    let j = jacobian(&f, r, n);
    let rk = stoich_rank(c);
    let dec = parametric_rank(&j, &SignContext::free(nsym));
    let rank_condition = Formula::new(c.symbols.clone(), ctx.clone(), f.clone(), dec.disjunction_for(rk));
    let mut row_conditions = Vec::with_capacity(n);
    for row in &j {
        let mut disj = Vec::new();
        for col in 0..c.reactions() {
            let mut e = Poly::zero(nsym);
            for (i, jx) in row.iter().enumerate() {
                let s = c.stoich[i][col];
                if s != 0 {
                    e = &e + &jx.scale(&Q::from_integer(BigInt::from(s)));
                }
            }
            if !e.is_zero() {
                disj.push(Constraint::truth().and_nonzero(&e));
            }
        }
        row_conditions.push(Formula::new(c.symbols.clone(), ctx.clone(), f.clone(), disj));
    }
    CompletenessConditions { rank_condition, row_conditions, stoich_rank: rk }
}

/// Laws written as polynomials, for verification and reporting.
pub fn laws_as_polys(laws: &[LinearLaw], r: usize) -> Vec<Poly<Q>> {
    laws.iter().map(|l| l.to_poly(r)).collect()
}

/// Primitive form with positive leading coefficient under degrevlex.
pub fn canonical_poly(p: &Poly<Q>) -> Poly<Q> {
    p.primitive(&TermOrder::DegRevLex)
}
