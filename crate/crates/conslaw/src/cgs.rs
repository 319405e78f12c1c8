//! Comprehensive Gröbner systems by naive branch splitting on parameter
//! coefficients, the generic branch over `Q(k)[x]`, and conversion of branch
//! syzygies into syzygies of the input system.
//!
//! Polynomials of the input live over `r` parameters followed by `n`
//! variables. Branch conditions are constraints over the `r` parameters
//! only; branch bases are polynomials over the `n` variables with
//! coefficients in `Q(k)`.

use crate::algebra::ratfun::content_parts;
use crate::algebra::{Field, Mon, Poly, RatFun, TermOrder, Q};
use crate::groebner::{
    buchberger, conversion_with, convert_syzygies, module_gb, normal_form, schreyer_with, Conversion, GbHook, ModVec,
    ModuleOrder,
};
use crate::parametric::{normalize_atom, Constraint, Knowledge, PointSampler, SignContext, ATOM_ORDER};

/// Default limit on the number of explored recursion nodes.
pub const DEFAULT_MAX_BRANCHES: usize = 512;

/// One branch: on the parameter set `condition` the specialization of
/// `basis` is a Gröbner basis of the specialized input.
#[derive(Clone, Debug)]
pub struct Branch {
    pub condition: Constraint,
    pub basis: Vec<Poly<RatFun>>,
    /// The input with coefficients reduced modulo the branch equations.
    pub input: Vec<Poly<RatFun>>,
    /// `basis·B1 = inputᵀ` and `input·B2 = basisᵀ`.
    pub conversion: Option<Conversion<RatFun>>,
}

impl Branch {
    /// Basis specialized at a parameter point; `None` when a denominator
    /// vanishes there.
    pub fn specialize(&self, point: &[Q]) -> Option<Vec<Poly<Q>>> {
        self.basis.iter().map(|g| specialize(g, point)).collect()
    }
}

/// Up to `want` random rational parameter points satisfying `condition`
/// (over `r` parameters with sign assumptions `ctx`) at which the branch
/// basis is defined.
pub fn sample_condition(condition: &Constraint, ctx: &SignContext, want: usize, seed: u64) -> Vec<Vec<Q>> {
    let map: Vec<usize> = (0..ctx.len()).collect();
    let mut sampler = PointSampler::new(ctx, &condition.equations, &map, seed);
    sampler.collect(want, want * 50, |p| condition.holds_at(p))
}

/// Specializes the parameters of `f` (over `r` parameters then variables),
/// giving polynomials over the variables only.
pub fn specialize_input(f: &[Poly<Q>], r: usize, point: &[Q]) -> Vec<Poly<Q>> {
    f.iter().map(|p| specialize(&to_generic(p, r), point).expect("polynomial coefficients")).collect()
}

/// Result of [`cgs`]; `complete` is false when the branch budget ran out.
#[derive(Clone, Debug)]
pub struct Cgs {
    pub branches: Vec<Branch>,
    pub complete: bool,
}

/// Options for [`cgs`].
#[derive(Clone, Copy, Debug)]
pub struct CgsOptions {
    pub order: TermOrder,
    pub max_branches: usize,
}

impl Default for CgsOptions {
    fn default() -> Self {
        CgsOptions { order: TermOrder::DegRevLex, max_branches: DEFAULT_MAX_BRANCHES }
    }
}

/// Reduces `Q(k)` coefficients modulo the branch equations and collects the
/// parameter polynomials whose non-vanishing the computation relies on.
struct BranchHook {
    eqs: Vec<Poly<Q>>,
    r: usize,
    record: bool,
    found: Vec<Poly<Q>>,
}

impl BranchHook {
    fn new(eqs: Vec<Poly<Q>>, r: usize, record: bool) -> Self {
        BranchHook { eqs, r, record, found: Vec::new() }
    }
}

impl GbHook<RatFun> for BranchHook {
    fn is_active(&self) -> bool {
        !self.eqs.is_empty()
    }

    fn normalize(&self, c: &RatFun) -> RatFun {
        reduce_coeff(c, &self.eqs)
    }

    fn on_new_element(&mut self, g: &ModVec<RatFun>) {
        if !self.record {
            return;
        }
        let (num, den) = content_parts(self.r, g.coeffs());
        let lc = g.leading(&ModuleOrder::top(ATOM_ORDER)).map(|(_, _, c)| c);
        self.found.push(num.clone());
        self.found.push(den.clone());
        if let Some(lc) = lc {
            // leading coefficient of the primitive part
            let prim = lc.div(&RatFun::new(num, den));
            let (pn, pd) = prim.parts(self.r);
            self.found.push(pn);
            self.found.push(pd);
        }
    }
}

fn reduce_coeff(c: &RatFun, eqs: &[Poly<Q>]) -> RatFun {
    if eqs.is_empty() {
        return c.clone();
    }
    c.map_parts(|p| normal_form(p, eqs, &ATOM_ORDER))
}

/// Comprehensive Gröbner system of `f` (over `r` parameters then variables).
pub fn cgs(f: &[Poly<Q>], r: usize, opts: &CgsOptions) -> Cgs {
    let mut run = Run::new(f, r, opts, false);
    run.rec(Constraint::truth());
    Cgs { branches: run.branches, complete: run.complete }
}

/// The generic branch: Gröbner basis over `Q(k)[x]`, valid where every
/// recorded denominator and leading coefficient is nonzero.
pub fn generic_branch(f: &[Poly<Q>], r: usize, order: TermOrder) -> Branch {
    let opts = CgsOptions { order, max_branches: 1 };
    let mut run = Run::new(f, r, &opts, true);
    run.rec(Constraint::truth());
    run.branches.pop().expect("the root branch is always consistent")
}

struct Run<'a> {
    f: &'a [Poly<Q>],
    r: usize,
    opts: CgsOptions,
    generic_only: bool,
    nodes: usize,
    complete: bool,
    branches: Vec<Branch>,
}

impl<'a> Run<'a> {
    fn new(f: &'a [Poly<Q>], r: usize, opts: &CgsOptions, generic_only: bool) -> Self {
        Run { f, r, opts: *opts, generic_only, nodes: 0, complete: true, branches: Vec::new() }
    }

    fn rec(&mut self, gamma: Constraint) {
        if self.nodes >= self.opts.max_branches {
            self.complete = false;
            return;
        }
        self.nodes += 1;
        let r = self.r;
        let know = Knowledge::new(&gamma, &SignContext::free(r));
        if know.is_inconsistent() {
            return;
        }
        let eqs = if gamma.equations.is_empty() { Vec::new() } else { buchberger(&gamma.equations, &ATOM_ORDER) };
        let input: Vec<Poly<RatFun>> = self
            .f
            .iter()
            .map(|p| to_generic(p, r).map_coeffs(|c| reduce_coeff(c, &eqs)))
            .map(|p| Poly::from_terms(p.nvars(), p.into_terms().filter(|(_, c)| !c.is_zero())))
            .collect();
        let mut hook = BranchHook::new(eqs, r, true);
        let nonzero: Vec<Poly<RatFun>> = input.iter().filter(|p| !p.is_zero()).cloned().collect();
        let conversion =
            if nonzero.is_empty() { None } else { Some(conversion_with(&input, &self.opts.order, &mut hook)) };
        let basis = conversion.as_ref().map(|c| c.basis.clone()).unwrap_or_default();

        let mut atoms: Vec<Poly<Q>> = Vec::new();
        for h in hook.found.iter().flat_map(split_monomial_factor) {
            let h = know.reduce(&h);
            if h.is_zero() || know.proves_nonzero(&h) {
                continue;
            }
            if gamma.inequations.iter().any(|n| n.div_exact(&h, &ATOM_ORDER).is_some()) {
                continue;
            }
            let a = normalize_atom(&h);
            if !atoms.contains(&a) {
                atoms.push(a);
            }
        }
        atoms.sort_by(|a, b| cmp_atoms(b, a));
        let condition = atoms.iter().fold(gamma.clone(), |c, a| c.and_nonzero(a));
        self.branches.push(Branch { condition: simplify(&condition, &know), basis, input, conversion });
        if self.generic_only {
            return;
        }
        for (i, a) in atoms.iter().enumerate() {
            let child = atoms[..i].iter().fold(gamma.and_zero(a), |c, b| c.and_nonzero(b));
            self.rec(child);
        }
    }
}

/// Compares by leading monomial, then by the remaining terms.
fn cmp_atoms(a: &Poly<Q>, b: &Poly<Q>) -> std::cmp::Ordering {
    let ta = a.sorted_terms(&ATOM_ORDER);
    let tb = b.sorted_terms(&ATOM_ORDER);
    for (x, y) in ta.iter().zip(&tb) {
        let o = ATOM_ORDER.cmp(x.0, y.0).then_with(|| x.1.cmp(y.1));
        if o.is_ne() {
            return o;
        }
    }
    ta.len().cmp(&tb.len())
}

/// Drops inequations that reduce to nonzero constants modulo the equations.
fn simplify(c: &Constraint, know: &Knowledge) -> Constraint {
    let mut out = c.clone();
    out.inequations.retain(|p| {
        let r = know.reduce(p);
        !(r.is_constant() && !r.is_zero())
    });
    out
}

/// Splits off the monomial factor of `p`: one atom per parameter dividing
/// every term, plus the remaining cofactor.
fn split_monomial_factor(p: &Poly<Q>) -> Vec<Poly<Q>> {
    if p.is_zero() || p.is_constant() {
        return Vec::new();
    }
    let n = p.nvars();
    let g = p.terms().fold(p.terms().next().unwrap().0.clone(), |acc, (m, _)| acc.gcd(m));
    let mut out: Vec<Poly<Q>> = (0..n).filter(|&i| g.0[i] > 0).map(|i| Poly::var(n, i)).collect();
    let rest = p.div_exact(&Poly::term(n, g, Q::from_integer(1.into())), &ATOM_ORDER).expect("monomial divides");
    if !rest.is_constant() {
        out.push(rest);
    }
    out
}

/// Rewrites `p` over `r` parameters and `n` variables as a polynomial over the
/// variables with coefficients in `Q(k)`.
pub fn to_generic(p: &Poly<Q>, r: usize) -> Poly<RatFun> {
    let n = p.nvars() - r;
    let mut groups: std::collections::BTreeMap<Mon, Poly<Q>> = std::collections::BTreeMap::new();
    for (m, c) in p.terms() {
        let km = Mon(m.0[..r].to_vec());
        let xm = Mon(m.0[r..].to_vec());
        groups.entry(xm).or_insert_with(|| Poly::zero(r)).add_term(km, c.clone());
    }
    Poly::from_terms(n, groups.into_iter().map(|(m, c)| (m, RatFun::from_poly(c))))
}

/// Embeds a polynomial over `r` parameters and `n` variables whose
/// coefficients are parameter polynomials back into `Q[k, x]`. Panics on a
/// proper fraction.
pub fn from_generic(p: &Poly<RatFun>, r: usize) -> Poly<Q> {
    let n = p.nvars();
    let mut out = Poly::zero(r + n);
    for (xm, c) in p.terms() {
        let (num, den) = c.parts(r);
        assert!(den.is_constant(), "fractional coefficient");
        let s = den.constant_term().inv();
        for (km, kc) in num.terms() {
            let mut e = km.0.clone();
            e.extend_from_slice(&xm.0);
            out.add_term(Mon(e), kc.mul(&s));
        }
    }
    out
}

/// Multiplies a vector over `Q(k)[x]` by the lcm of its denominators divided
/// by the gcd of its numerators, giving a vector over `Q[k, x]` with no
/// parameter content. Returns the vector and the multiplier's denominator
/// part (the lcm), whose non-vanishing keeps the result meaningful.
pub fn clear_denominators(v: &ModVec<RatFun>, r: usize) -> (ModVec<Q>, Poly<Q>) {
    let (num, den) = content_parts(r, v.coeffs());
    if num.is_zero() {
        return (ModVec::zero(v.rank(), r + v.nvars()), Poly::one(r));
    }
    let scale = RatFun::new(den.clone(), num);
    let cleared = ModVec(v.0.iter().map(|p| from_generic(&p.scale(&scale), r)).collect());
    (cleared, den)
}

/// Specializes the parameters of a `Q(k)[x]` polynomial.
pub fn specialize(p: &Poly<RatFun>, point: &[Q]) -> Option<Poly<Q>> {
    let mut out = Poly::zero(p.nvars());
    for (m, c) in p.terms() {
        out.add_term(m.clone(), c.eval(point)?);
    }
    Some(out)
}

/// Syzygies of the branch input valid on the branch: Schreyer syzygies of
/// the basis mapped through `B2`, completed by the columns of `I − B2·B1`.
pub fn converted_syzygies(b: &Branch, order: TermOrder) -> Vec<ModVec<RatFun>> {
    let m = b.input.len();
    let n = b.input.first().map_or(0, |p| p.nvars());
    let conv = match &b.conversion {
        Some(c) => c,
        None => return (0..m).map(|i| ModVec::unit(m, n, i)).collect(),
    };
    let hook = branch_normalizer(b);
    let syz_g = schreyer_with(&conv.basis, &order, &hook);
    convert_syzygies(conv, &syz_g, m, n)
        .into_iter()
        .map(|v| ModVec(v.0.into_iter().map(|p| reduce_poly(&p, &hook)).collect()))
        .filter(|v| !v.is_zero())
        .collect()
}

/// [`converted_syzygies`] interreduced to a module Gröbner basis under
/// term-over-position.
pub fn branch_syzygies(b: &Branch, order: TermOrder) -> Vec<ModVec<RatFun>> {
    let raw = converted_syzygies(b, order);
    if raw.is_empty() {
        return raw;
    }
    let mut hook = branch_normalizer(b);
    module_gb(&raw, &ModuleOrder::top(order), false, &mut hook).basis
}

fn branch_normalizer(b: &Branch) -> BranchHook {
    let c = &b.condition;
    let r = c.equations.iter().chain(&c.inequations).next().map_or(0, |p| p.nvars());
    let eqs = if c.equations.is_empty() { Vec::new() } else { buchberger(&c.equations, &ATOM_ORDER) };
    BranchHook::new(eqs, r, false)
}

fn reduce_poly(p: &Poly<RatFun>, hook: &BranchHook) -> Poly<RatFun> {
    if !hook.is_active() {
        return p.clone();
    }
    Poly::from_terms(p.nvars(), p.terms().map(|(m, c)| (m.clone(), hook.normalize(c))).filter(|(_, c)| !c.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;
    use crate::model_io::parse_poly;

    fn system(params: &[&str], vars: &[&str], f: &[&str]) -> (SymbolTable, Vec<Poly<Q>>) {
        let t = SymbolTable::from_strs(params, vars);
        let f = f.iter().map(|s| parse_poly(s, &t).unwrap()).collect();
        (t, f)
    }

    fn conditions(c: &Cgs, t: &SymbolTable) -> Vec<String> {
        let names = t.param_table().names();
        c.branches.iter().map(|b| b.condition.to_text(&names)).collect()
    }

    #[test]
    fn toy_with_four_branches() {
        let (t, f) = system(&["k1", "k2"], &["x1", "x2"], &["-k1*x1", "-k2*x2", "(k1 + k2)*x1*x2"]);
        let c = cgs(&f, 2, &CgsOptions::default());
        assert!(c.complete);
        assert_eq!(c.branches.len(), 4, "{:?}", conditions(&c, &t));
        assert_eq!(c.branches[0].basis.len(), 2);
        let g = generic_branch(&f, 2, TermOrder::DegRevLex);
        assert_eq!(g.condition.to_text(&t.param_table().names()), "k1 != 0 && k2 != 0");
    }

    #[test]
    fn toy_with_two_branches() {
        let (_, f) = system(&["k1"], &["x1", "x2"], &["x2 + x1", "x2 + x1 + 1", "k1*x2"]);
        let c = cgs(&f, 1, &CgsOptions { order: TermOrder::Lex, ..Default::default() });
        assert_eq!(c.branches.len(), 2);
        assert!(c.branches.iter().all(|b| b.basis.len() == 1 && b.basis[0].is_constant()));
    }

    #[test]
    fn linear_toy_degeneracies() {
        let (t, f) = system(&["k1", "k2"], &["x1", "x2"], &["x1 + k1*x2 + k2", "k1*x1 + x2 + k2"]);
        let c = cgs(&f, 2, &CgsOptions { order: TermOrder::Lex, ..Default::default() });
        let conds = conditions(&c, &t);
        assert_eq!(conds.len(), 4, "{conds:?}");
        assert!(conds.contains(&"k1 + 1 = 0 && k2 != 0".to_string()), "{conds:?}");
        assert!(conds.contains(&"k1 + 1 = 0 && k2 = 0".to_string()), "{conds:?}");
    }

    #[test]
    fn parameter_free_input() {
        let (_, f) = system(&[], &["x1", "x2"], &["x1*x2 - 1", "x2^2 - x1"]);
        let c = cgs(&f, 0, &CgsOptions::default());
        assert_eq!(c.branches.len(), 1);
        assert!(c.branches[0].condition.is_truth());
    }

    #[test]
    fn generic_conversion_reproduces_known_syzygies() {
        let (_, f) = system(&["k1", "k2"], &["x1", "x2"], &["-k1*x1", "-k2*x2", "(k1 + k2)*x1*x2"]);
        let b = generic_branch(&f, 2, TermOrder::DegRevLex);
        let syz = converted_syzygies(&b, TermOrder::DegRevLex);
        let cleared: Vec<ModVec<Q>> = syz.iter().map(|v| clear_denominators(v, 2).0).collect();
        let t = SymbolTable::from_strs(&["k1", "k2"], &["x1", "x2"]);
        let expect = [["-k2*x2", "k1*x1", "0"], ["0", "k1*x1 + k2*x1", "k2"]];
        for e in expect {
            let v = ModVec(e.iter().map(|s| parse_poly(s, &t).unwrap()).collect::<Vec<_>>());
            let names = t.names();
            let shown: Vec<Vec<String>> =
                cleared.iter().map(|c| c.0.iter().map(|p| p.to_text(&names)).collect()).collect();
            assert!(cleared.iter().any(|c| proportional(c, &v)), "{e:?} missing from {shown:?}");
        }
        for v in &cleared {
            assert!(v.dot(&f).is_zero());
        }
        let mo = ModuleOrder::top(TermOrder::DegRevLex);
        let gb = branch_syzygies(&b, TermOrder::DegRevLex);
        for v in &syz {
            assert!(crate::groebner::module_normal_form(v, &gb, &mo).is_zero());
        }
    }

    /// `a` and `b` agree up to a nonzero rational factor.
    fn proportional(a: &ModVec<Q>, b: &ModVec<Q>) -> bool {
        let pa: Vec<Poly<Q>> = a.0.clone();
        let (i, lead) = match pa.iter().enumerate().find(|(_, p)| !p.is_zero()) {
            Some((i, p)) => (i, p.lc(&ATOM_ORDER).unwrap().clone()),
            None => return b.is_zero(),
        };
        let lb = match b.0[i].lc(&ATOM_ORDER) {
            Some(c) => c.clone(),
            None => return false,
        };
        a.0.iter().zip(&b.0).all(|(x, y)| x.scale(&lb) == y.scale(&lead))
    }
}
