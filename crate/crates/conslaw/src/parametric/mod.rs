//! Parametric linear algebra: constraints and the deduction procedure,
//! rank decomposition with case splitting, the completeness and
//! independence tests, and a three-valued decision backend.

pub mod complete;
pub mod decide;
pub mod rank;
pub mod smt;

use num_traits::{Signed, Zero};

use crate::algebra::{Mon, Poly, TermOrder, Q};
use crate::groebner::{buchberger, normal_form};

pub use complete::{is_complete, is_independent, CheckReport};
pub use decide::{decide, Answer, Formula, PointSampler, Verdict, DEFAULT_BUDGET};
pub use rank::{parametric_rank, RankCase, RankDecomposition};
pub use smt::to_smtlib;

/// Order used for atom normalization and premise reduction.
pub const ATOM_ORDER: TermOrder = TermOrder::DegRevLex;

/// Sign assumption on one symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    NonNegative,
    Free,
}

/// Sign assumptions for every symbol of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignContext(pub Vec<Sign>);

impl SignContext {
    pub fn free(nsym: usize) -> Self {
        SignContext(vec![Sign::Free; nsym])
    }

    pub fn positive(nsym: usize) -> Self {
        SignContext(vec![Sign::Positive; nsym])
    }

    /// Positive parameters followed by variables with sign `x`.
    pub fn model(r: usize, n: usize, x: Sign) -> Self {
        let mut v = vec![Sign::Positive; r];
        v.extend(std::iter::repeat_n(x, n));
        SignContext(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when `v` satisfies the assumption on symbol `i`.
    pub fn admits(&self, i: usize, v: &Q) -> bool {
        match self.0[i] {
            Sign::Positive => v.is_positive(),
            Sign::NonNegative => !v.is_negative(),
            Sign::Free => true,
        }
    }

    /// True when `p` is provably nonzero by sign analysis: all coefficients
    /// share one sign, every monomial is non-negative under the assumptions
    /// and at least one is strictly positive.
    pub fn sign_nonzero(&self, p: &Poly<Q>) -> bool {
        if p.is_zero() {
            return false;
        }
        let first = p.terms().next().map(|(_, c)| c.is_positive()).unwrap();
        let mut strict = false;
        for (m, c) in p.terms() {
            if c.is_positive() != first {
                return false;
            }
            match self.monomial_sign(m) {
                MonSign::Positive => strict = true,
                MonSign::NonNegative => {}
                MonSign::Unknown => return false,
            }
        }
        strict
    }

    fn monomial_sign(&self, m: &Mon) -> MonSign {
        let mut s = MonSign::Positive;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match self.0[i] {
                Sign::Positive => {}
                Sign::NonNegative => s = MonSign::NonNegative,
                Sign::Free if e % 2 == 0 => s = MonSign::NonNegative,
                Sign::Free => return MonSign::Unknown,
            }
        }
        s
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MonSign {
    Positive,
    NonNegative,
    Unknown,
}

/// Normalizes an atom to a primitive integer polynomial with positive
/// leading coefficient.
pub fn normalize_atom(p: &Poly<Q>) -> Poly<Q> {
    p.primitive(&ATOM_ORDER)
}

/// Conjunction of polynomial equations `p = 0` and inequations `p ≠ 0`.
/// Atoms are stored normalized and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Constraint {
    pub equations: Vec<Poly<Q>>,
    pub inequations: Vec<Poly<Q>>,
}

impl Constraint {
    /// The empty conjunction.
    pub fn truth() -> Self {
        Constraint::default()
    }

    pub fn is_truth(&self) -> bool {
        self.equations.is_empty() && self.inequations.is_empty()
    }

    pub fn and_zero(&self, p: &Poly<Q>) -> Self {
        let mut c = self.clone();
        let a = normalize_atom(p);
        if !a.is_zero() && !c.equations.contains(&a) {
            c.equations.push(a);
        }
        c
    }

    pub fn and_nonzero(&self, p: &Poly<Q>) -> Self {
        let mut c = self.clone();
        let a = normalize_atom(p);
        if !c.inequations.contains(&a) {
            c.inequations.push(a);
        }
        c
    }

    /// Conjunction of two constraints.
    pub fn and(&self, o: &Constraint) -> Self {
        let mut c = self.clone();
        for e in &o.equations {
            c = c.and_zero(e);
        }
        for e in &o.inequations {
            c = c.and_nonzero(e);
        }
        c
    }

    /// Exact truth value at a point of the full symbol space.
    pub fn holds_at(&self, point: &[Q]) -> bool {
        self.equations.iter().all(|p| p.eval(point).is_zero())
            && self.inequations.iter().all(|p| !p.eval(point).is_zero())
    }

    /// Text such as `k1 != 0 && x1 - x2 = 0`, or `true`.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.is_truth() {
            return "true".to_string();
        }
        let mut parts: Vec<String> = self.equations.iter().map(|p| format!("{} = 0", p.to_text(names))).collect();
        parts.extend(self.inequations.iter().map(|p| format!("{} != 0", p.to_text(names))));
        parts.join(" && ")
    }
}

/// A constraint together with a Gröbner basis of its equations, answering
/// deduction queries `Γ ⊢ p = 0`, `Γ ⊢ p ≠ 0` and `Γ ⊢ false` soundly.
#[derive(Clone, Debug)]
pub struct Knowledge {
    pub gamma: Constraint,
    pub ctx: SignContext,
    gb: Vec<Poly<Q>>,
    inconsistent: bool,
}

impl Knowledge {
    pub fn new(gamma: &Constraint, ctx: &SignContext) -> Self {
        let gb = if gamma.equations.is_empty() { Vec::new() } else { saturate_positive(&gamma.equations, ctx) };
        let mut k = Knowledge { gamma: gamma.clone(), ctx: ctx.clone(), gb, inconsistent: false };
        k.inconsistent = k.gb.iter().any(|g| g.is_constant())
            || k.gamma.inequations.iter().any(|p| k.reduce(p).is_zero())
            || k.gamma.equations.iter().any(|p| ctx.sign_nonzero(p))
            || k.gb.iter().any(|p| ctx.sign_nonzero(p));
        k
    }

    /// `Γ ⊢ false`.
    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Normal form modulo the equations of `Γ`.
    pub fn reduce(&self, p: &Poly<Q>) -> Poly<Q> {
        if self.gb.is_empty() {
            p.clone()
        } else {
            normal_form(p, &self.gb, &ATOM_ORDER)
        }
    }

    /// `Γ ⊢ p = 0`.
    pub fn proves_zero(&self, p: &Poly<Q>) -> bool {
        p.is_zero() || self.reduce(p).is_zero()
    }

    /// `Γ ⊢ p ≠ 0`.
    pub fn proves_nonzero(&self, p: &Poly<Q>) -> bool {
        self.nonzero_rec(p, 3)
    }

    fn nonzero_rec(&self, p: &Poly<Q>, depth: u32) -> bool {
        if p.is_zero() {
            return false;
        }
        if p.is_constant() {
            return true;
        }
        let r = self.reduce(p);
        if r.is_zero() {
            return false;
        }
        if r.is_constant() {
            return true;
        }
        let (a, b) = (normalize_atom(p), normalize_atom(&r));
        if self.gamma.inequations.iter().any(|q| *q == a || *q == b) {
            return true;
        }
        if self.ctx.sign_nonzero(p) || self.ctx.sign_nonzero(&r) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        // products of known nonzero factors
        for q in &self.gamma.inequations {
            if q.is_constant() {
                continue;
            }
            if let Some(rest) = p.div_exact(q, &ATOM_ORDER) {
                if self.nonzero_rec(&rest, depth - 1) {
                    return true;
                }
            }
        }
        for (m, _) in p.terms().take(1) {
            // a single monomial factor made of provably nonzero symbols
            let g = p.terms().fold(m.clone(), |acc, (t, _)| acc.gcd(t));
            if !g.is_one() && (0..g.nvars()).all(|i| g.0[i] == 0 || self.ctx.0[i] == Sign::Positive) {
                let rest = p.div_exact(&Poly::term(p.nvars(), g, Q::from_integer(1.into())), &ATOM_ORDER);
                if let Some(rest) = rest {
                    return self.nonzero_rec(&rest, depth - 1);
                }
            }
        }
        false
    }
}

/// Gröbner basis of `⟨E⟩ : h^∞` where `h` is the product of the positive
/// symbols occurring in `E`. Both ideals have the same zeros wherever those
/// symbols are positive, so deductions stay sound under the sign context.
fn saturate_positive(equations: &[Poly<Q>], ctx: &SignContext) -> Vec<Poly<Q>> {
    let gb = buchberger(equations, &ATOM_ORDER);
    let nvars = equations[0].nvars();
    let positive: Vec<usize> =
        (0..nvars).filter(|&i| ctx.0[i] == Sign::Positive && gb.iter().any(|p| p.uses_var(i))).collect();
    if positive.is_empty() || gb.iter().any(|g| g.is_constant()) {
        return gb;
    }
    // Rabinowitsch trick with a fresh most-significant symbol t: eliminate t
    // from ⟨E, t·h − 1⟩.
    let map: Vec<usize> = (1..=nvars).collect();
    let mut h = Mon(vec![0; nvars + 1]);
    h.0[0] = 1;
    for &i in &positive {
        h.0[i + 1] = 1;
    }
    let mut gens: Vec<Poly<Q>> = gb.iter().map(|p| p.remap(nvars + 1, &map)).collect();
    gens.push(&Poly::term(nvars + 1, h, Q::from_integer(1.into())) - &Poly::one(nvars + 1));
    let elim = buchberger(&gens, &TermOrder::params_above(1));
    let back: Vec<usize> = std::iter::once(0).chain(0..nvars).collect();
    let kept: Vec<Poly<Q>> = elim.iter().filter(|p| !p.uses_var(0)).map(|p| p.remap(nvars, &back)).collect();
    if kept.is_empty() {
        return gb;
    }
    buchberger(&kept, &ATOM_ORDER)
}

/// Sound deduction `Γ ⊢ claim` under sign assumptions: `true` means yes,
/// `false` means unknown.
pub fn deduce(gamma: &Constraint, claim: &Atom, ctx: &SignContext) -> bool {
    let k = Knowledge::new(gamma, ctx);
    if k.is_inconsistent() {
        return true;
    }
    match claim {
        Atom::Zero(p) => k.proves_zero(p),
        Atom::NonZero(p) => k.proves_nonzero(p),
        Atom::False => false,
    }
}

/// Atomic claim for [`deduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Zero(Poly<Q>),
    NonZero(Poly<Q>),
    False,
}

/// Jacobian `D_x F` (rows = entries of `F`) over a table of `r` parameters
/// followed by `n` variables.
pub fn jacobian(f: &[Poly<Q>], r: usize, n: usize) -> Vec<Vec<Poly<Q>>> {
    f.iter().map(|fi| (0..n).map(|j| fi.diff(r + j)).collect()).collect()
}
