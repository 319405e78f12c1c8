//! Polynomial conservation laws from syzygies: curl of polynomial vector
//! fields, the conservative part of degree-truncated syzygy spaces, path
//! integration to potentials, the branch-wise orchestration, verification
//! and the split of laws into generators and algebra-generated ones.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::linalg::{Echelon, Insert};
use crate::algebra::{Field, Mon, Poly, RatFun, TermOrder, Q};
use crate::cgs::{
    branch_syzygies, cgs, clear_denominators, converted_syzygies, generic_branch, sample_condition, to_generic, Branch,
    CgsOptions, DEFAULT_MAX_BRANCHES,
};
use crate::groebner::{normal_form, truncated_span, unconditional_syzygies, DegreeConvention, GroebnerError, ModVec};
use crate::model_io::OdeModel;
use crate::monomial_laws::{verify_monomial, MonomialLaw};
use crate::parametric::{normalize_atom, Constraint, Knowledge, SignContext, ATOM_ORDER};

/// Errors raised by the law pipelines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LawError {
    #[error("degree bound must be at least 1, got {0}")]
    DegreeTooSmall(i64),
    #[error("vector field is not conservative: curl entry ({0}, {1}) is nonzero")]
    NotConservative(usize, usize),
    #[error("computed law failed verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Antisymmetric curl `∂g_i/∂x_j − ∂g_j/∂x_i`, stored for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurlTensor<C: Field> {
    pub entries: BTreeMap<(usize, usize), Poly<C>>,
}

impl<C: Field> CurlTensor<C> {
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|p| p.is_zero())
    }

    /// First nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.entries.iter().find(|(_, p)| !p.is_zero()).map(|(k, _)| *k)
    }
}

/// Curl of `g`, whose component `i` pairs with symbol `first_var + i`.
pub fn curl<C: Field>(g: &ModVec<C>, first_var: usize) -> CurlTensor<C> {
    let n = g.rank();
    let mut entries = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let e = &g.0[i].diff(first_var + j) - &g.0[j].diff(first_var + i);
            entries.insert((i, j), e);
        }
    }
    CurlTensor { entries }
}

/// Gradient of `phi` with respect to the `n` symbols starting at `first_var`.
pub fn gradient<C: Field>(phi: &Poly<C>, first_var: usize, n: usize) -> ModVec<C> {
    ModVec((0..n).map(|i| phi.diff(first_var + i)).collect())
}

/// Potential of a conservative field along the staircase path from the
/// origin, so that `φ(0) = 0`.
pub fn integrate<C: Field>(g: &ModVec<C>, first_var: usize) -> Result<Poly<C>, LawError> {
    let c = curl(g, first_var);
    if let Some((i, j)) = c.first_nonzero() {
        return Err(LawError::NotConservative(i, j));
    }
    let n = g.rank();
    let mut phi = Poly::zero(g.nvars());
    for i in 0..n {
        let zeros: Vec<(usize, C)> = (i + 1..n).map(|j| (first_var + j, C::zero())).collect();
        phi = &phi + &g.0[i].substitute(&zeros).integrate_var(first_var + i);
    }
    Ok(phi)
}

/// Basis of the conservative elements of `span(v)`: the kernel of the curl
/// map, found as linear relations among the curls.
pub fn conservative_basis<C: Field>(v: &[ModVec<C>], first_var: usize) -> Vec<ModVec<C>> {
    let mut ech: Echelon<(usize, usize, Mon), C> = Echelon::new(true);
    let mut out = Vec::new();
    for g in v {
        let mut key = BTreeMap::new();
        for ((i, j), p) in curl(g, first_var).entries {
            for (m, c) in p.terms() {
                key.insert((i, j, m.clone()), c.clone());
            }
        }
        if let Insert::Dependent(rel) = ech.insert(key) {
            let (m, nv) = (v[0].rank(), v[0].nvars());
            let combo = rel.iter().fold(ModVec::zero(m, nv), |acc, (&id, c)| acc.add(&v[id].scale(c)));
            if !combo.is_zero() {
                out.push(combo);
            }
        }
    }
    out
}

/// Monomial wrapper ordered by degrevlex.
#[derive(Clone, PartialEq, Eq)]
struct DegKey(Mon);

impl PartialOrd for DegKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for DegKey {
    fn cmp(&self, o: &Self) -> Ordering {
        TermOrder::DegRevLex.cmp(&self.0, &o.0)
    }
}

/// Reduced echelon basis of the span of `potentials`, pivots on degrevlex
/// leading monomials, lowest pivot first. The elements of degree at most
/// `e` span the degree-`e` part of the span.
pub fn echelon_laws<C: Field>(potentials: &[Poly<C>]) -> Vec<Poly<C>> {
    let Some(nv) = potentials.first().map(|p| p.nvars()) else { return Vec::new() };
    let mut ech: Echelon<DegKey, C> = Echelon::new(false);
    for p in potentials {
        ech.insert(p.terms().map(|(m, c)| (DegKey(m.clone()), c.clone())).collect());
    }
    let mut rows: Vec<Poly<C>> = ech
        .reduced_rows()
        .into_iter()
        .map(|(row, _)| Poly::from_terms(nv, row.into_iter().map(|(k, c)| (k.0, c))))
        .collect();
    rows.reverse();
    rows
}

/// Which laws are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The generic branch over `Q(k)[x]`.
    Generic,
    /// Every branch of a comprehensive Gröbner system.
    AllBranches,
    /// Parameter-free syzygies, valid for all parameter values.
    Unconditional,
}

/// Where conservative syzygies are looked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Only the module generators themselves.
    ModuleBasis,
    /// The full degree-truncated vector space.
    VectorSpace,
}

/// Options of [`conservation_laws`].
#[derive(Clone, Copy, Debug)]
pub struct LawOptions {
    /// Law degree `d`; syzygies are taken up to degree `d − 1`.
    pub degree: i64,
    pub mode: Mode,
    pub source: Source,
    pub convention: DegreeConvention,
    /// Interreduce the syzygy generators (reduced module Gröbner basis).
    pub reduced: bool,
    /// Keep only branches compatible with positive parameters.
    pub positive_params: bool,
    pub max_branches: usize,
    pub order: TermOrder,
}

impl Default for LawOptions {
    fn default() -> Self {
        LawOptions {
            degree: 2,
            mode: Mode::Generic,
            source: Source::VectorSpace,
            convention: DegreeConvention::Product,
            reduced: true,
            positive_params: true,
            max_branches: DEFAULT_MAX_BRANCHES,
            order: TermOrder::DegRevLex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LawKind {
    Linear,
    Monomial,
    Polynomial,
}

impl LawKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LawKind::Linear => "linear",
            LawKind::Monomial => "monomial",
            LawKind::Polynomial => "polynomial",
        }
    }
}

/// A polynomial over parameters and variables, or a monomial with integer
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawExpr {
    Poly(Poly<Q>),
    Monomial(MonomialLaw),
}

/// A conservation law with the parameter set on which it is valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservationLaw {
    pub kind: LawKind,
    pub expr: LawExpr,
    /// Condition on the parameters (polynomials over the parameters only).
    pub condition: Constraint,
    pub degree: i64,
}

impl ConservationLaw {
    /// Law from a polynomial over the model's symbols, with its kind derived
    /// from the degree in the variables.
    pub fn polynomial(p: Poly<Q>, r: usize, condition: Constraint) -> Self {
        let degree = p.degree_in(r..p.nvars());
        let kind = if degree == 1 { LawKind::Linear } else { LawKind::Polynomial };
        ConservationLaw { kind, expr: LawExpr::Poly(p), condition, degree }
    }

    pub fn as_poly(&self) -> Option<&Poly<Q>> {
        match &self.expr {
            LawExpr::Poly(p) => Some(p),
            LawExpr::Monomial(_) => None,
        }
    }

    /// Text of the law over the model's symbol names.
    pub fn to_text(&self, m: &OdeModel) -> String {
        match &self.expr {
            LawExpr::Poly(p) => p.to_text(&m.symbols.names()),
            LawExpr::Monomial(l) => l.to_text(m.symbols.vars()),
        }
    }
}

/// Laws found on one branch.
#[derive(Clone, Debug)]
pub struct BranchLaws {
    pub condition: Constraint,
    pub laws: Vec<ConservationLaw>,
    /// Number of syzygy module generators.
    pub generators: usize,
    /// Dimension of the truncated syzygy space (vector-space source only).
    pub space_dim: Option<usize>,
}

impl BranchLaws {
    pub fn count(&self, kind: LawKind) -> usize {
        self.laws.iter().filter(|l| l.kind == kind).count()
    }
}

/// Laws of all branches; `complete` is false when the branch budget ran out.
#[derive(Clone, Debug)]
pub struct LawReport {
    pub branches: Vec<BranchLaws>,
    pub complete: bool,
}

impl LawReport {
    /// `(total, linear, polynomial)` per branch.
    pub fn counts(&self) -> Vec<(usize, usize, usize)> {
        self.branches.iter().map(|b| (b.laws.len(), b.count(LawKind::Linear), b.count(LawKind::Polynomial))).collect()
    }
}

/// Coefficient fields from which laws are brought back into `Q[k, x]`.
trait LawField: Field {
    /// Law over the model's symbols and the parameter factors whose
    /// non-vanishing it relies on.
    fn to_model_poly(p: &Poly<Self>, r: usize) -> (Poly<Q>, Poly<Q>);
}

impl LawField for Q {
    fn to_model_poly(p: &Poly<Q>, r: usize) -> (Poly<Q>, Poly<Q>) {
        let n = p.nvars();
        let map: Vec<usize> = (0..n).map(|i| r + i).collect();
        (p.remap(r + n, &map), Poly::one(r))
    }
}

impl LawField for RatFun {
    fn to_model_poly(p: &Poly<RatFun>, r: usize) -> (Poly<Q>, Poly<Q>) {
        let (v, den) = clear_denominators(&ModVec(vec![p.clone()]), r);
        (v.0.into_iter().next().unwrap(), den)
    }
}

/// Orders laws' signs: content removed and the coefficient of the leading
/// variable monomial (degrevlex) has a positive leading coefficient.
pub fn normalize_law(p: &Poly<Q>, r: usize) -> Poly<Q> {
    if p.is_zero() {
        return p.clone();
    }
    let prim = p.primitive(&TermOrder::DegRevLex);
    let g = to_generic(&prim, r);
    let lc = g.lc(&TermOrder::DegRevLex).expect("nonzero").parts(r).0;
    if lc.leading_sign(&TermOrder::DegRevLex) < 0 {
        -&prim
    } else {
        prim
    }
}

/// Laws from syzygy generators over the variables (component `i` pairs with
/// variable `i`).
fn laws_from_syzygies<C: LawField>(
    gens: &[ModVec<C>],
    r: usize,
    condition: &Constraint,
    opts: &LawOptions,
) -> Result<BranchLaws, LawError> {
    let (conservative, space_dim) = match opts.source {
        Source::ModuleBasis => (gens.iter().filter(|g| curl(g, 0).is_zero()).cloned().collect::<Vec<_>>(), None),
        Source::VectorSpace => {
            let bound = opts.convention.syzygy_bound(opts.degree);
            let space = truncated_span(gens, bound, opts.convention, &opts.order)?;
            (conservative_basis(&space.elements, 0), Some(space.elements.len()))
        }
    };
    let mut potentials = Vec::with_capacity(conservative.len());
    for g in &conservative {
        potentials.push(integrate(g, 0)?);
    }
    let basis = match opts.source {
        Source::ModuleBasis => potentials,
        Source::VectorSpace => echelon_laws(&potentials),
    };
    let mut laws = Vec::new();
    for p in &basis {
        let (q, den) = C::to_model_poly(p, r);
        if q.is_zero() {
            continue;
        }
        let mut cond = condition.clone();
        for a in nonconstant_factors(&den) {
            if !Knowledge::new(&cond, &SignContext::free(r)).proves_nonzero(&a) {
                cond = cond.and_nonzero(&a);
            }
        }
        laws.push(ConservationLaw::polynomial(normalize_law(&q, r), r, cond));
    }
    Ok(BranchLaws { condition: condition.clone(), laws, generators: gens.len(), space_dim })
}

/// Splits a parameter polynomial into its parameter factors and the
/// remaining cofactor (constant parts dropped).
fn nonconstant_factors(p: &Poly<Q>) -> Vec<Poly<Q>> {
    if p.is_constant() {
        return Vec::new();
    }
    let n = p.nvars();
    let g = p.terms().fold(p.terms().next().unwrap().0.clone(), |acc, (m, _)| acc.gcd(m));
    let mut out: Vec<Poly<Q>> = (0..n).filter(|&i| g.0[i] > 0).map(|i| Poly::var(n, i)).collect();
    let rest = p.div_exact(&Poly::term(n, g, Q::from_integer(1.into())), &ATOM_ORDER).expect("monomial divides");
    if !rest.is_constant() {
        out.push(normalize_atom(&rest));
    }
    out
}

fn syzygies_of(b: &Branch, opts: &LawOptions) -> Vec<ModVec<RatFun>> {
    if opts.reduced {
        branch_syzygies(b, opts.order)
    } else {
        converted_syzygies(b, opts.order)
    }
}

/// Polynomial conservation laws of `m` up to degree `opts.degree`.
pub fn conservation_laws(m: &OdeModel, opts: &LawOptions) -> Result<LawReport, LawError> {
    if opts.degree < 1 {
        return Err(LawError::DegreeTooSmall(opts.degree));
    }
    let (r, n) = (m.r(), m.n());
    let report = match opts.mode {
        Mode::Unconditional => {
            let s = unconditional_syzygies(&m.rhs, r);
            let map: Vec<usize> = (0..r + n).map(|i| i.saturating_sub(r)).collect();
            let gens: Vec<ModVec<Q>> =
                s.generators.iter().map(|g| ModVec(g.0.iter().map(|p| p.remap(n, &map)).collect())).collect();
            let b = laws_from_syzygies(&gens, r, &Constraint::truth(), opts)?;
            LawReport { branches: vec![b], complete: true }
        }
        Mode::Generic => {
            let b = generic_branch(&m.rhs, r, opts.order);
            let gens = syzygies_of(&b, opts);
            LawReport { branches: vec![laws_from_syzygies(&gens, r, &b.condition, opts)?], complete: true }
        }
        Mode::AllBranches => {
            let c = cgs(&m.rhs, r, &CgsOptions { order: opts.order, max_branches: opts.max_branches });
            let positive = SignContext::positive(r);
            let kept: Vec<&Branch> = c
                .branches
                .iter()
                .filter(|b| !opts.positive_params || !Knowledge::new(&b.condition, &positive).is_inconsistent())
                .collect();
            let branches = kept
                .par_iter()
                .map(|b| laws_from_syzygies(&syzygies_of(b, opts), r, &b.condition, opts))
                .collect::<Result<Vec<_>, _>>()?;
            LawReport { branches, complete: c.complete }
        }
    };
    for b in &report.branches {
        for law in &b.laws {
            if !verify_law(m, law) {
                return Err(LawError::VerificationFailed(law.to_text(m)));
            }
        }
    }
    Ok(report)
}

/// Number of random branch points re-checked by [`verify_law`].
pub const VERIFY_POINTS: usize = 20;

/// Checks `grad(φ)·F = 0` exactly (modulo the condition's equations) and
/// again after specializing random points of the condition.
pub fn verify_law(m: &OdeModel, law: &ConservationLaw) -> bool {
    let phi = match &law.expr {
        LawExpr::Monomial(l) => return verify_monomial(m, l),
        LawExpr::Poly(p) => p,
    };
    let (r, nsym) = (m.r(), m.nsym());
    let d = derivative_along(m, phi);
    let lift: Vec<usize> = (0..r).collect();
    let eqs: Vec<Poly<Q>> = law.condition.equations.iter().map(|e| e.remap(nsym, &lift)).collect();
    let exact = if eqs.is_empty() {
        d.is_zero()
    } else {
        let gb = crate::groebner::buchberger(&eqs, &ATOM_ORDER);
        normal_form(&d, &gb, &ATOM_ORDER).is_zero()
    };
    if !exact {
        return false;
    }
    let mut points = sample_condition(&law.condition, &SignContext::positive(r), VERIFY_POINTS, 0x7e51);
    if points.is_empty() {
        points = sample_condition(&law.condition, &SignContext::free(r), VERIFY_POINTS, 0x7e51);
    }
    points.iter().all(|k| {
        let bind: Vec<(usize, Q)> = k.iter().cloned().enumerate().collect();
        d.substitute(&bind).is_zero()
    })
}

/// `grad(φ)·F` over the model's symbols.
pub fn derivative_along(m: &OdeModel, phi: &Poly<Q>) -> Poly<Q> {
    let r = m.r();
    m.rhs.iter().enumerate().fold(Poly::zero(m.nsym()), |acc, (i, f)| &acc + &(&phi.diff(r + i) * f))
}

/// Splits laws into generators and laws generated by them: laws are visited
/// by increasing degree; a law is generated when it is a `Q(k)`-linear
/// combination of products of current generators of degree at most `d`,
/// otherwise it becomes a generator. Returns indices into `laws`.
pub fn filter_generated(laws: &[Poly<Q>], r: usize, d: i64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..laws.len()).collect();
    idx.sort_by_key(|&i| laws[i].degree_in(r..laws[i].nvars()));
    let mut gens: Vec<usize> = Vec::new();
    let mut generated = Vec::new();
    let mut span: Echelon<Mon, RatFun> = Echelon::new(false);
    for i in idx {
        if span.contains(&coefficient_vector(&laws[i], r)) {
            generated.push(i);
        } else {
            gens.push(i);
            span = Echelon::new(false);
            for p in products_up_to(&gens.iter().map(|&g| laws[g].clone()).collect::<Vec<_>>(), r, d) {
                span.insert(coefficient_vector(&p, r));
            }
        }
    }
    (gens, generated)
}

fn coefficient_vector(p: &Poly<Q>, r: usize) -> BTreeMap<Mon, RatFun> {
    to_generic(p, r).into_terms().collect()
}

/// All products of one or more factors (with repetition) whose degree in
/// the variables is at most `d`.
fn products_up_to(factors: &[Poly<Q>], r: usize, d: i64) -> Vec<Poly<Q>> {
    let deg = |p: &Poly<Q>| p.degree_in(r..p.nvars());
    let mut out = Vec::new();
    let mut frontier: Vec<(usize, Poly<Q>)> = vec![];
    for (i, f) in factors.iter().enumerate() {
        if deg(f) <= d {
            frontier.push((i, f.clone()));
        }
    }
    while let Some((last, p)) = frontier.pop() {
        for (j, f) in factors.iter().enumerate().skip(last) {
            let q = &p * f;
            if deg(&q) <= d {
                frontier.push((j, q));
            }
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;
    use crate::model_io::{parse_model, parse_poly};

    fn vecq(t: &SymbolTable, s: &[&str]) -> ModVec<Q> {
        ModVec(s.iter().map(|x| parse_poly(x, t).unwrap()).collect())
    }

    #[test]
    fn curl_examples() {
        let t = SymbolTable::from_strs(&[], &["x1", "x2"]);
        assert!(curl(&vecq(&t, &["x2", "x1"]), 0).is_zero());
        let c = curl(&vecq(&t, &["-x2", "x1"]), 0);
        assert_eq!(c.entries[&(0, 1)], parse_poly("-2", &t).unwrap());
        // x1·(x2, x1) leaves the conservative fields
        assert!(!curl(&vecq(&t, &["x1*x2", "x1^2"]), 0).is_zero());
    }

    #[test]
    fn integration_examples() {
        let t = SymbolTable::from_strs(&[], &["x1", "x2", "x3"]);
        let phi = integrate(&vecq(&t, &["x2", "x1", "1"]), 0).unwrap();
        assert_eq!(phi, parse_poly("x1*x2 + x3", &t).unwrap());
        let t2 = SymbolTable::from_strs(&[], &["x1", "x2"]);
        let phi = integrate(&vecq(&t2, &["x1", "x2"]), 0).unwrap();
        assert_eq!(phi, parse_poly("x1^2/2 + x2^2/2", &t2).unwrap());
        assert_eq!(integrate(&vecq(&t2, &["-x2", "x1"]), 0), Err(LawError::NotConservative(0, 1)));
    }

    #[test]
    fn degree_zero_syzygies_are_conservative() {
        let t = SymbolTable::from_strs(&[], &["x1", "x2"]);
        let v = vec![vecq(&t, &["1", "0"]), vecq(&t, &["1", "-1"])];
        assert_eq!(conservative_basis(&v, 0).len(), 2);
        let w = vec![vecq(&t, &["1", "0"]), vecq(&t, &["x2", "0"])];
        assert_eq!(conservative_basis(&w, 0), vec![vecq(&t, &["1", "0"])]);
    }

    #[test]
    fn verification_examples() {
        let mm = parse_model(
            "params: k1 k2 k3\nvars: x1 x2 x3\n\
             ode x1 = -k1*x1*x3 + k2*x2\node x2 = k1*x1*x3 - k2*x2 - k3*x2\node x3 = -k1*x1*x3 + k2*x2 + k3*x2",
        )
        .unwrap();
        let law = |s: &str| ConservationLaw::polynomial(parse_poly(s, &mm.symbols).unwrap(), 3, Constraint::truth());
        assert!(verify_law(&mm, &law("x2 + x3")));
        assert!(!verify_law(&mm, &law("x1 + x2")));
    }

    #[test]
    fn ideal_closure_fails() {
        let m = parse_model("vars: x1 x2\node x1 = x1\node x2 = -x2").unwrap();
        let base = ConservationLaw::polynomial(parse_poly("x1*x2", &m.symbols).unwrap(), 0, Constraint::truth());
        assert!(verify_law(&m, &base));
        let times = ConservationLaw::polynomial(parse_poly("x1^2*x2", &m.symbols).unwrap(), 0, Constraint::truth());
        assert!(!verify_law(&m, &times));
    }
}
