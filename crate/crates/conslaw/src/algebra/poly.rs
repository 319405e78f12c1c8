//! Sparse multivariate polynomials over a coefficient [`Field`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{Mon, TermOrder};
use super::rational::{fmt_q, Field, Q};
use super::AlgebraError;

/// Degree reported for the zero polynomial; lies below every real degree.
pub const NEG_INF_DEGREE: i64 = i64::MIN;

/// Sparse polynomial: a map from exponent vectors to nonzero coefficients.
/// Storage is keyed by the plain lexicographic order on exponent vectors so
/// that equality is structural; term orders are applied on demand.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<C: Field> {
    nvars: usize,
    terms: BTreeMap<Mon, C>,
}

/// Binary polynomial operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked arithmetic that rejects operands built over different symbol
/// tables.
pub fn arith<C: Field>(p: &Poly<C>, q: &Poly<C>, op: ArithOp) -> Result<Poly<C>, AlgebraError> {
    if p.nvars != q.nvars {
        return Err(AlgebraError::SymbolMismatch(p.nvars, q.nvars));
    }
    Ok(match op {
        ArithOp::Add => p + q,
        ArithOp::Sub => p - q,
        ArithOp::Mul => p * q,
    })
}

impl<C: Field> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(nvars, Mon::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(nvars, Mon::var(nvars, i), C::one())
    }

    pub fn term(nvars: usize, m: Mon, c: C) -> Self {
        debug_assert_eq!(m.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Mon, C)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mon, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mon, C)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Mon) -> Option<&C> {
        self.terms.get(m)
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Mon, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Removes and returns the coefficient of `m`.
    pub fn remove_term(&mut self, m: &Mon) -> Option<C> {
        self.terms.remove(m)
    }

    /// Overwrites the coefficient of `m` (removing it when `c` is zero).
    pub fn set_term(&mut self, m: Mon, c: C) {
        if c.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    /// True when the polynomial has no non-constant term.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Constant coefficient (zero when absent).
    pub fn constant_term(&self) -> C {
        self.terms.get(&Mon::one(self.nvars)).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree, or [`NEG_INF_DEGREE`] for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(NEG_INF_DEGREE)
    }

    /// Largest exponent of variable `v`.
    pub fn degree_in_var(&self, v: usize) -> i32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Largest total degree within the symbol range `range`.
    pub fn degree_in(&self, range: std::ops::Range<usize>) -> i64 {
        self.terms.keys().map(|m| m.degree_in(range.clone())).max().unwrap_or(NEG_INF_DEGREE)
    }

    /// Indices of symbols that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] != 0)).collect()
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] != 0)
    }

    /// Leading (monomial, coefficient) under `order`.
    pub fn leading(&self, order: &TermOrder) -> Option<(&Mon, &C)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn lm(&self, order: &TermOrder) -> Option<&Mon> {
        self.leading(order).map(|(m, _)| m)
    }

    pub fn lc(&self, order: &TermOrder) -> Option<&C> {
        self.leading(order).map(|(_, c)| c)
    }

    /// Terms sorted in descending `order`.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(&Mon, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect() }
    }

    /// Multiplies by the term `c·m`.
    pub fn mul_term(&self, m: &Mon, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(t, v)| (t.mul(m), v.mul(c))).collect() }
    }

    /// `self - c·m·other` computed in place.
    pub fn sub_mul_term(&mut self, other: &Poly<C>, m: &Mon, c: &C) {
        for (t, v) in other.terms.iter() {
            self.add_term(t.mul(m), v.mul(c).neg());
        }
    }

    /// Divides every coefficient by the leading coefficient under `order`.
    pub fn monic(&self, order: &TermOrder) -> Self {
        match self.lc(order) {
            Some(c) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to symbol `v`.
    pub fn diff(&self, v: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e != 0 {
                let mut nm = m.clone();
                nm.0[v] -= 1;
                out.add_term(nm, c.mul(&C::from_int(e as i64)));
            }
        }
        out
    }

    /// Checked derivative that rejects an out-of-range symbol index.
    pub fn try_diff(&self, v: usize) -> Result<Self, AlgebraError> {
        if v >= self.nvars {
            return Err(AlgebraError::UnknownSymbol(format!("#{}", v)));
        }
        Ok(self.diff(v))
    }

    /// Antiderivative with respect to `v` (no constant).
    pub fn integrate_var(&self, v: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            nm.0[v] += 1;
            let e = nm.0[v];
            out.add_term(nm, c.div(&C::from_int(e as i64)));
        }
        out
    }

    /// Substitutes field values for a subset of symbols.
    pub fn substitute(&self, bindings: &[(usize, C)]) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let mut coef = c.clone();
            for (v, val) in bindings {
                let e = nm.0[*v];
                if e != 0 {
                    coef = coef.mul(&field_pow(val, e));
                    nm.0[*v] = 0;
                }
            }
            out.add_term(nm, coef);
        }
        out
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t = t.mul(&field_pow(&point[i], e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Replaces symbol `v` by the polynomial `val`.
    pub fn compose_var(&self, v: usize, val: &Poly<C>) -> Self {
        let mut out = Poly::zero(self.nvars);
        let mut powers: Vec<Poly<C>> = vec![Poly::one(self.nvars)];
        for (m, c) in &self.terms {
            let e = m.0[v];
            assert!(e >= 0, "cannot compose into a negative power");
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * val;
                powers.push(next);
            }
            let mut nm = m.clone();
            nm.0[v] = 0;
            let part = powers[e as usize].mul_term(&nm, c);
            out = &out + &part;
        }
        out
    }

    /// Re-embeds into `nvars` symbols via `map[i]` = new index of old symbol
    /// `i`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Mon(e), c.clone());
        }
        out
    }

    /// Maps coefficients into another field.
    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Exact division by `d` under `order`; `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Poly<C>, order: &TermOrder) -> Option<Self> {
        let (dm, dc) = d.leading(order)?;
        let (dm, dcinv) = (dm.clone(), dc.inv());
        let mut r = self.clone();
        let mut quo = Poly::zero(self.nvars);
        while let Some((m, c)) = r.leading(order) {
            if !dm.divides(m) {
                return None;
            }
            let t = m.div(&dm);
            let k = c.mul(&dcinv);
            r.sub_mul_term(d, &t, &k);
            quo.add_term(t, k);
        }
        Some(quo)
    }
}

pub(crate) fn field_pow<C: Field>(x: &C, e: i32) -> C {
    if e < 0 {
        return field_pow(&x.inv(), -e);
    }
    let mut acc = C::one();
    let mut base = x.clone();
    let mut e = e as u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

impl<C: Field> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, o: &Poly<C>) -> Poly<C> {
        debug_assert_eq!(self.nvars, o.nvars);
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Field> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: &Poly<C>) -> Poly<C> {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }
}

impl<C: Field> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: &Poly<C>) -> Poly<C> {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }
}

impl<C: Field> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}

impl Poly<Q> {
    /// Renders with symbol names, terms in degrevlex-descending order.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let order = TermOrder::DegRevLex;
        let mut s = String::new();
        for (i, (m, c)) in self.sorted_terms(&order).into_iter().enumerate() {
            let neg = num_traits::Signed::is_negative(c);
            let a = num_traits::Signed::abs(c);
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = mono_text(m, names);
            if mono.is_empty() {
                s.push_str(&fmt_q(&a));
            } else if num_traits::One::is_one(&a) {
                s.push_str(&mono);
            } else {
                s.push_str(&fmt_q(&a));
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }

    /// Sign of the leading coefficient under `order` (0 for the zero
    /// polynomial).
    pub fn leading_sign(&self, order: &TermOrder) -> i32 {
        match self.lc(order) {
            None => 0,
            Some(c) if num_traits::Signed::is_negative(c) => -1,
            Some(_) => 1,
        }
    }

    /// Scales to integer coefficients with gcd 1 and positive leading
    /// coefficient under `order`.
    pub fn primitive(&self, order: &TermOrder) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = super::rational::denominator_lcm(self.terms.values());
        let scaled = self.scale(&Q::from_integer(l));
        let g = super::rational::numerator_gcd(scaled.terms.values());
        let mut f = Q::from_integer(g);
        if scaled.leading_sign(order) < 0 {
            f = -f;
        }
        scaled.scale(&f.recip())
    }
}

/// Renders an exponent vector as `x1^2*x3`; empty for the unit monomial.
pub fn mono_text(m: &Mon, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

/// Compares two polynomials' leading terms under `order`; zero is smallest.
pub fn cmp_leading<C: Field>(a: &Poly<C>, b: &Poly<C>, order: &TermOrder) -> Ordering {
    match (a.lm(order), b.lm(order)) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some(x), Some(y)) => order.cmp(x, y),
    }
}
