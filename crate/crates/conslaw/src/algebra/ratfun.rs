//! Multivariate polynomial gcd over `Q` and the field `Q(k)` of rational
//! functions in the parameters.

use super::monomial::{Mon, TermOrder};
use super::poly::Poly;
use super::rational::{fmt_q, Field, Q};

const GCD_ORDER: TermOrder = TermOrder::DegRevLex;

/// Greatest common divisor, normalized monic under degrevlex (zero only when
/// both inputs are zero).
pub fn poly_gcd(a: &Poly<Q>, b: &Poly<Q>) -> Poly<Q> {
    let g = gcd_rec(a, b);
    g.monic(&GCD_ORDER)
}

fn gcd_rec(a: &Poly<Q>, b: &Poly<Q>) -> Poly<Q> {
    let n = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a.len() == 1 {
        return monomial_gcd(a, b);
    }
    if b.len() == 1 {
        return monomial_gcd(b, a);
    }
    let v = match (0..n).find(|&v| a.uses_var(v) || b.uses_var(v)) {
        Some(v) => v,
        None => return Poly::one(n),
    };
    match (a.uses_var(v), b.uses_var(v)) {
        (false, _) => gcd_rec(a, &content_in(b, v)),
        (_, false) => gcd_rec(&content_in(a, v), b),
        _ => {
            let ca = content_in(a, v);
            let cb = content_in(b, v);
            let pa = exact(a, &ca);
            let pb = exact(b, &cb);
            let c = gcd_rec(&ca, &cb);
            let g = primitive_prs(pa, pb, v);
            &c * &g
        }
    }
}

fn monomial_gcd(mono: &Poly<Q>, p: &Poly<Q>) -> Poly<Q> {
    let (m, _) = mono.terms().next().expect("single term");
    let g = p.terms().fold(m.clone(), |acc, (t, _)| acc.gcd(t));
    Poly::term(p.nvars(), g, Q::one())
}

fn exact(a: &Poly<Q>, d: &Poly<Q>) -> Poly<Q> {
    if d.is_constant() {
        return a.scale(&d.constant_term().inv());
    }
    a.div_exact(d, &GCD_ORDER).expect("exact polynomial division")
}

/// Coefficients of `p` as a polynomial in symbol `v`, indexed by exponent.
fn coeffs_in(p: &Poly<Q>, v: usize) -> Vec<Poly<Q>> {
    let d = p.degree_in_var(v).max(0) as usize;
    let mut out = vec![Poly::zero(p.nvars()); d + 1];
    for (m, c) in p.terms() {
        let e = m.0[v] as usize;
        let mut nm = m.clone();
        nm.0[v] = 0;
        out[e].add_term(nm, c.clone());
    }
    out
}

fn content_in(p: &Poly<Q>, v: usize) -> Poly<Q> {
    let mut g = Poly::zero(p.nvars());
    for c in coeffs_in(p, v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            return Poly::one(p.nvars());
        }
    }
    g
}

fn pp_in(p: &Poly<Q>, v: usize) -> Poly<Q> {
    exact(p, &content_in(p, v))
}

fn lead_in(p: &Poly<Q>, v: usize) -> (i32, Poly<Q>) {
    let d = p.degree_in_var(v);
    (d, coeffs_in(p, v).swap_remove(d as usize))
}

fn prem(f: &Poly<Q>, g: &Poly<Q>, v: usize) -> Poly<Q> {
    let (dg, lcg) = lead_in(g, v);
    let n = f.nvars();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in_var(v) >= dg {
        let (dr, lcr) = lead_in(&r, v);
        let shift = Poly::term(n, Mon::var(n, v), Q::one()).pow((dr - dg) as u32);
        let sub = &(&lcr * &shift) * g;
        r = &(&r * &lcg) - &sub;
    }
    r
}

fn primitive_prs(a: Poly<Q>, b: Poly<Q>, v: usize) -> Poly<Q> {
    let (mut f, mut g) = if a.degree_in_var(v) >= b.degree_in_var(v) { (a, b) } else { (b, a) };
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return pp_in(&g, v);
        }
        if !r.uses_var(v) {
            return Poly::one(f.nvars());
        }
        f = g;
        g = pp_in(&r, v);
    }
}

/// Element of `Q(k)`: either a rational constant or a reduced fraction of
/// polynomials in the parameters with a monic (degrevlex) denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RatFun {
    Const(Q),
    Frac { num: Poly<Q>, den: Poly<Q> },
}

impl RatFun {
    /// Builds `num/den` in canonical form. Panics when `den` is zero.
    pub fn new(num: Poly<Q>, den: Poly<Q>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun::Const(Q::from_integer(0.into()));
        }
        if den.is_constant() {
            return Self::from_parts_unchecked(num.scale(&den.constant_term().inv()), Poly::one(den.nvars()));
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_constant() { (num, den) } else { (exact(&num, &g), exact(&den, &g)) };
        let lc = den.lc(&GCD_ORDER).expect("nonzero").clone();
        Self::from_parts_unchecked(num.scale(&lc.inv()), den.scale(&lc.inv()))
    }

    fn from_parts_unchecked(num: Poly<Q>, den: Poly<Q>) -> Self {
        if num.is_constant() && den.is_constant() {
            RatFun::Const(num.constant_term().div(&den.constant_term()))
        } else {
            RatFun::Frac { num, den }
        }
    }

    /// Embeds a parameter polynomial.
    pub fn from_poly(p: Poly<Q>) -> Self {
        if p.is_constant() {
            return RatFun::Const(p.constant_term());
        }
        let n = p.nvars();
        RatFun::Frac { num: p, den: Poly::one(n) }
    }

    /// Numerator and denominator over `nparams` symbols.
    pub fn parts(&self, nparams: usize) -> (Poly<Q>, Poly<Q>) {
        match self {
            RatFun::Const(c) => (Poly::constant(nparams, c.clone()), Poly::one(nparams)),
            RatFun::Frac { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn as_const(&self) -> Option<&Q> {
        match self {
            RatFun::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Evaluates at a parameter point; `None` when the denominator vanishes.
    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        match self {
            RatFun::Const(c) => Some(c.clone()),
            RatFun::Frac { num, den } => {
                let d = den.eval(point);
                if d.is_zero() {
                    None
                } else {
                    Some(num.eval(point).div(&d))
                }
            }
        }
    }

    /// Applies `f` to numerator and denominator and renormalizes; used to
    /// reduce coefficients modulo parameter equations.
    pub fn map_parts(&self, f: impl Fn(&Poly<Q>) -> Poly<Q>) -> Self {
        match self {
            RatFun::Const(_) => self.clone(),
            RatFun::Frac { num, den } => {
                let d = f(den);
                if d.is_zero() {
                    return self.clone();
                }
                RatFun::new(f(num), d)
            }
        }
    }

    pub fn to_text(&self, names: &[String]) -> String {
        match self {
            RatFun::Const(c) => fmt_q(c),
            RatFun::Frac { num, den } => {
                if den.is_constant() {
                    return num.scale(&den.constant_term().inv()).to_text(names);
                }
                let wrap = |p: &Poly<Q>| {
                    let t = p.to_text(names);
                    if p.len() > 1 {
                        format!("({t})")
                    } else {
                        t
                    }
                };
                format!("{}/{}", wrap(num), wrap(den))
            }
        }
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun::Const(Field::zero())
    }
    fn one() -> Self {
        RatFun::Const(Field::one())
    }
    fn is_zero(&self) -> bool {
        matches!(self, RatFun::Const(c) if Field::is_zero(c))
    }
    fn is_one(&self) -> bool {
        matches!(self, RatFun::Const(c) if Field::is_one(c))
    }
    fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (RatFun::Const(a), RatFun::Const(b)) => RatFun::Const(a + b),
            (RatFun::Frac { num, den }, RatFun::Const(c)) | (RatFun::Const(c), RatFun::Frac { num, den }) => {
                if Field::is_zero(c) {
                    return RatFun::Frac { num: num.clone(), den: den.clone() };
                }
                let n = num + &den.scale(c);
                if n.is_zero() {
                    return Self::zero();
                }
                Self::from_parts_unchecked(n, den.clone())
            }
            (RatFun::Frac { num: n1, den: d1 }, RatFun::Frac { num: n2, den: d2 }) => {
                if d1 == d2 {
                    RatFun::new(n1 + n2, d1.clone())
                } else {
                    RatFun::new(&(n1 * d2) + &(n2 * d1), d1 * d2)
                }
            }
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (RatFun::Const(a), RatFun::Const(b)) => RatFun::Const(a * b),
            (RatFun::Frac { num, den }, RatFun::Const(c)) | (RatFun::Const(c), RatFun::Frac { num, den }) => {
                if Field::is_zero(c) {
                    return Self::zero();
                }
                RatFun::Frac { num: num.scale(c), den: den.clone() }
            }
            (RatFun::Frac { num: n1, den: d1 }, RatFun::Frac { num: n2, den: d2 }) => {
                let g1 = poly_gcd(n1, d2);
                let g2 = poly_gcd(n2, d1);
                let a = exact(n1, &g1);
                let b = exact(n2, &g2);
                let c = exact(d1, &g2);
                let d = exact(d2, &g1);
                let den = &c * &d;
                let lc = den.lc(&GCD_ORDER).expect("nonzero").clone();
                Self::from_parts_unchecked((&a * &b).scale(&lc.inv()), den.scale(&lc.inv()))
            }
        }
    }
    fn neg(&self) -> Self {
        match self {
            RatFun::Const(c) => RatFun::Const(-c),
            RatFun::Frac { num, den } => RatFun::Frac { num: -num, den: den.clone() },
        }
    }
    fn inv(&self) -> Self {
        match self {
            RatFun::Const(c) => RatFun::Const(c.inv()),
            RatFun::Frac { num, den } => {
                let lc = num.lc(&GCD_ORDER).expect("nonzero").clone();
                Self::from_parts_unchecked(den.scale(&lc.inv()), num.scale(&lc.inv()))
            }
        }
    }
    fn from_q(x: &Q) -> Self {
        RatFun::Const(x.clone())
    }
    fn is_rational(&self) -> bool {
        matches!(self, RatFun::Const(_))
    }
}

/// Gcd of all numerators and lcm of all denominators of a set of `Q(k)`
/// elements, as parameter polynomials over `nparams` symbols.
pub fn content_parts<'a>(nparams: usize, xs: impl IntoIterator<Item = &'a RatFun>) -> (Poly<Q>, Poly<Q>) {
    let mut g = Poly::zero(nparams);
    let mut l = Poly::one(nparams);
    for x in xs {
        let (n, d) = x.parts(nparams);
        g = poly_gcd(&g, &n);
        if !d.is_constant() {
            let gd = poly_gcd(&l, &d);
            l = exact(&(&l * &d), &gd).monic(&GCD_ORDER);
        }
    }
    (g, l)
}
