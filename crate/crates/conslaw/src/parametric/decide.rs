//! Sound but incomplete decision of closed formulas
//! `∀ (signs ∧ F = 0 → Γ_1 ∨ … ∨ Γ_s)`: proofs by deduction with case
//! splits, refutations by exact rational witnesses, and SMT-LIB export for
//! everything else.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Poly, SymbolTable, TermOrder, Q};
use crate::groebner::buchberger;

use super::{normalize_atom, Constraint, Knowledge, Sign, SignContext};

/// Default number of witness-search trials.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Depth of nested case splits tried by the prover.
const PROOF_DEPTH: u32 = 4;

/// Largest integer whose divisors are enumerated for rational roots.
const ROOT_DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// Budget from `CONSLAW_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("CONSLAW_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// `∀ symbols (ctx ∧ premise = 0 → ∨ conclusion)`.
#[derive(Clone, Debug)]
pub struct Formula {
    pub symbols: SymbolTable,
    pub ctx: SignContext,
    /// Premise equations after simplification (normalized, deduplicated).
    pub premise: Vec<Poly<Q>>,
    /// Disjunction of constraints; empty means `false`.
    pub conclusion: Vec<Constraint>,
}

impl Formula {
    /// Builds a formula, dropping zero premise equations and those that are
    /// rational multiples of earlier ones.
    pub fn new(symbols: SymbolTable, ctx: SignContext, premise: Vec<Poly<Q>>, conclusion: Vec<Constraint>) -> Self {
        let mut eqs: Vec<Poly<Q>> = Vec::new();
        for p in premise {
            let a = normalize_atom(&p);
            if !a.is_zero() && !eqs.contains(&a) {
                eqs.push(a);
            }
        }
        Formula { symbols, ctx, premise: eqs, conclusion }
    }

    /// True when some disjunct holds at `point`.
    pub fn conclusion_holds(&self, point: &[Q]) -> bool {
        self.conclusion.iter().any(|c| c.holds_at(point))
    }

    /// True when `point` satisfies the sign assumptions and the premise.
    pub fn premise_holds(&self, point: &[Q]) -> bool {
        point.iter().enumerate().all(|(i, v)| self.ctx.admits(i, v))
            && self.premise.iter().all(|p| p.eval(point).is_zero())
    }

    /// Readable form, e.g. `forall k1 x1 (k1 > 0 && … -> …)`.
    pub fn to_text(&self) -> String {
        let names = self.symbols.names();
        let mut hyp: Vec<String> = Vec::new();
        for (i, s) in self.ctx.0.iter().enumerate() {
            match s {
                Sign::Positive => hyp.push(format!("{} > 0", names[i])),
                Sign::NonNegative => hyp.push(format!("{} >= 0", names[i])),
                Sign::Free => {}
            }
        }
        hyp.extend(self.premise.iter().map(|p| format!("{} = 0", p.to_text(&names))));
        let concl = if self.conclusion.is_empty() {
            "false".to_string()
        } else {
            self.conclusion.iter().map(|c| format!("({})", c.to_text(&names))).collect::<Vec<_>>().join(" || ")
        };
        let hyp = if hyp.is_empty() { "true".to_string() } else { hyp.join(" && ") };
        format!("forall {} ({} -> {})", names.join(" "), hyp, concl)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn as_str(&self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

/// Outcome of [`decide`]. A `No` always carries a witness that satisfies
/// the premise and falsifies the conclusion exactly.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Vec<Q>>,
    pub exported_formula: Option<String>,
    /// Witness-search trials spent.
    pub trials: usize,
}

impl Verdict {
    fn yes() -> Self {
        Verdict { answer: Answer::Yes, witness: None, exported_formula: None, trials: 0 }
    }
}

/// Decides a formula with at most `budget` witness-search trials.
pub fn decide(f: &Formula, budget: usize) -> Verdict {
    if f.conclusion.iter().any(|c| c.is_truth()) {
        return Verdict::yes();
    }
    let premise = f.premise.iter().fold(Constraint::truth(), |c, p| c.and_zero(p));
    if prove(&premise, &f.conclusion, &f.ctx, PROOF_DEPTH) {
        return Verdict::yes();
    }
    match search_witness(f, budget) {
        Search::Found(point, trials) => {
            Verdict { answer: Answer::No, witness: Some(point), exported_formula: None, trials }
        }
        Search::Infeasible => Verdict::yes(),
        Search::NotFound(trials) => {
            Verdict { answer: Answer::Unknown, witness: None, exported_formula: Some(super::to_smtlib(f)), trials }
        }
    }
}

/// True when `gamma` (under `ctx`) entails some disjunct, trying case splits
/// on undecided atoms up to `depth` levels.
fn prove(gamma: &Constraint, disj: &[Constraint], ctx: &SignContext, depth: u32) -> bool {
    let k = Knowledge::new(gamma, ctx);
    if k.is_inconsistent() {
        return true;
    }
    let entailed = |d: &Constraint| {
        d.equations.iter().all(|p| k.proves_zero(p)) && d.inequations.iter().all(|p| k.proves_nonzero(p))
    };
    if disj.iter().any(entailed) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let open = disj
        .iter()
        .flat_map(|d| d.inequations.iter().chain(d.equations.iter()))
        .find(|p| !k.proves_zero(p) && !k.proves_nonzero(p));
    match open {
        Some(a) => {
            prove(&gamma.and_nonzero(a), disj, ctx, depth - 1) && prove(&gamma.and_zero(a), disj, ctx, depth - 1)
        }
        None => false,
    }
}

enum Search {
    Found(Vec<Q>, usize),
    Infeasible,
    NotFound(usize),
}

/// Searches for a point of the premise set that violates the conclusion.
fn search_witness(f: &Formula, budget: usize) -> Search {
    let (r, n) = (f.symbols.r(), f.symbols.n());
    // variables first (largest), then parameters
    let map: Vec<usize> = (0..r + n).map(|i| if i < r { n + i } else { i - r }).collect();
    let mut sampler = PointSampler::new(&f.ctx, &f.premise, &map, 0x5eed);
    if sampler.is_infeasible() {
        return Search::Infeasible;
    }
    for trial in 0..budget {
        if let Some(point) = sampler.attempt() {
            if f.premise_holds(&point) && !f.conclusion_holds(&point) {
                return Search::Found(point, trial + 1);
            }
        }
    }
    Search::NotFound(budget)
}

/// Random exact points of `{signs} ∩ V(equations)`: a lex Gröbner basis
/// (symbols permuted by `map`, new index 0 most significant) is solved from
/// the smallest symbol upward, choosing free symbols at random and rational
/// roots otherwise.
pub struct PointSampler {
    ctx: SignContext,
    map: Vec<usize>,
    inv: Vec<usize>,
    by_top: Vec<Vec<Poly<Q>>>,
    infeasible: bool,
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(ctx: &SignContext, equations: &[Poly<Q>], map: &[usize], seed: u64) -> Self {
        let nsym = ctx.len();
        let mut inv = vec![0; nsym];
        for (old, &new) in map.iter().enumerate() {
            inv[new] = old;
        }
        let gb: Vec<Poly<Q>> = if equations.is_empty() {
            Vec::new()
        } else {
            let eqs: Vec<Poly<Q>> = equations.iter().map(|p| p.remap(nsym, map)).collect();
            buchberger(&eqs, &TermOrder::Lex)
        };
        let infeasible = gb.iter().any(|g| g.is_constant());
        let mut by_top: Vec<Vec<Poly<Q>>> = vec![Vec::new(); nsym];
        for g in gb {
            if let Some(top) = (0..nsym).find(|&v| g.uses_var(v)) {
                by_top[top].push(g);
            }
        }
        PointSampler {
            ctx: ctx.clone(),
            map: map.to_vec(),
            inv,
            by_top,
            infeasible,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// True when the equations have no complex solution.
    pub fn is_infeasible(&self) -> bool {
        self.infeasible
    }

    /// One sampling attempt, in the original symbol order; `None` when some
    /// symbol has no admissible rational value.
    pub fn attempt(&mut self) -> Option<Vec<Q>> {
        if self.infeasible {
            return None;
        }
        let nsym = self.map.len();
        let mut point_new = vec![Q::zero(); nsym];
        for v in (0..nsym).rev() {
            let sign = self.ctx.0[self.inv[v]];
            let bound: Vec<(usize, Q)> = (v + 1..nsym).map(|u| (u, point_new[u].clone())).collect();
            let polys: Vec<Vec<Q>> = self.by_top[v]
                .iter()
                .map(|g| dense_univariate(&g.substitute(&bound), v))
                .filter(|c| c.iter().any(|x| !x.is_zero()))
                .collect();
            let value = if polys.is_empty() {
                Some(random_value(&mut self.rng, sign))
            } else {
                let g = polys.iter().skip(1).fold(polys[0].clone(), |acc, p| univariate_gcd(&acc, p));
                let roots: Vec<Q> = rational_roots(&g)
                    .into_iter()
                    .filter(|x| match sign {
                        Sign::Positive => x.is_positive(),
                        Sign::NonNegative => !x.is_negative(),
                        Sign::Free => true,
                    })
                    .filter(|x| polys.iter().all(|p| horner(p, x).is_zero()))
                    .collect();
                roots.choose(&mut self.rng).cloned()
            };
            point_new[v] = value?;
        }
        Some((0..nsym).map(|old| point_new[self.map[old]].clone()).collect())
    }

    /// Up to `want` points satisfying `accept`, within `attempts` tries.
    pub fn collect(&mut self, want: usize, attempts: usize, accept: impl Fn(&[Q]) -> bool) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for _ in 0..attempts {
            if out.len() >= want {
                break;
            }
            if let Some(p) = self.attempt() {
                if accept(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

fn random_value(rng: &mut ChaCha8Rng, sign: Sign) -> Q {
    const SMALL: [(i64, i64); 7] = [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (3, 2), (2, 3)];
    if sign == Sign::NonNegative && rng.gen_ratio(1, 8) {
        return Q::zero();
    }
    let v = if rng.gen_bool(0.5) {
        let (a, b) = SMALL[rng.gen_range(0..SMALL.len())];
        Q::new(a.into(), b.into())
    } else {
        Q::new(rng.gen_range(1..=20i64).into(), rng.gen_range(1..=6i64).into())
    };
    if sign == Sign::Free && rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Coefficients (constant first) of a polynomial that only uses symbol `v`.
fn dense_univariate(p: &Poly<Q>, v: usize) -> Vec<Q> {
    let deg = p.degree_in_var(v).max(0) as usize;
    let mut c = vec![Q::zero(); deg + 1];
    for (m, a) in p.terms() {
        debug_assert!(m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0));
        c[m.0[v] as usize] += a;
    }
    c
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    p
}

fn horner(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn univariate_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Q::zero());
        }
    }
    r
}

fn univariate_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// All rational roots, by the rational root test (empty when the extreme
/// coefficients are too large to factor by trial division).
pub fn rational_roots(p: &[Q]) -> Vec<Q> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let l = crate::algebra::rational::denominator_lcm(p.iter());
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Q::zero());
    }
    let ints = &ints[low..];
    if ints.len() == 1 {
        return roots;
    }
    let (Some(a0), Some(an)) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64()) else { return roots };
    if a0 > ROOT_DIVISOR_LIMIT || an > ROOT_DIVISOR_LIMIT {
        return roots;
    }
    let qp: Vec<Q> = ints.iter().map(|c| Q::from_integer(c.clone())).collect();
    for num in divisors(a0) {
        for den in divisors(an) {
            if num.gcd(&den) != 1 {
                continue;
            }
            for s in [1i64, -1] {
                let x = Q::new(BigInt::from(num) * s, BigInt::from(den));
                if horner(&qp, &x).is_zero() && !roots.contains(&x) {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
