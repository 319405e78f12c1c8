//! Vectors in a free module `R^m` and module monomial orders.

use std::cmp::Ordering;

use crate::algebra::{Field, Mon, Poly, TermOrder};

/// How positions enter the module order. In both variants a lower position
/// index counts as larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    /// Term over position: compare monomials first.
    Top,
    /// Position over term: compare positions first.
    Pot,
}

/// Monomial order on module terms `x^a e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub terms: TermOrder,
    pub position: Position,
}

impl ModuleOrder {
    pub fn top(terms: TermOrder) -> Self {
        ModuleOrder { terms, position: Position::Top }
    }

    pub fn pot(terms: TermOrder) -> Self {
        ModuleOrder { terms, position: Position::Pot }
    }

    pub fn cmp(&self, a: (usize, &Mon), b: (usize, &Mon)) -> Ordering {
        let pos = b.0.cmp(&a.0);
        match self.position {
            Position::Top => self.terms.cmp(a.1, b.1).then(pos),
            Position::Pot => pos.then_with(|| self.terms.cmp(a.1, b.1)),
        }
    }
}

/// Element `(g_1, …, g_m)` of a free module over a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModVec<C: Field>(pub Vec<Poly<C>>);

impl<C: Field> ModVec<C> {
    pub fn zero(m: usize, nvars: usize) -> Self {
        ModVec(vec![Poly::zero(nvars); m])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(m: usize, nvars: usize, i: usize) -> Self {
        let mut v = Self::zero(m, nvars);
        v.0[i] = Poly::one(nvars);
        v
    }

    /// Rank-one vector wrapping a polynomial (ideal elements).
    pub fn scalar(p: Poly<C>) -> Self {
        ModVec(vec![p])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn nvars(&self) -> usize {
        self.0.first().map_or(0, |p| p.nvars())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_zero())
    }

    /// Leading `(position, monomial, coefficient)` under `mo`.
    pub fn leading(&self, mo: &ModuleOrder) -> Option<(usize, Mon, C)> {
        let mut best: Option<(usize, &Mon, &C)> = None;
        for (i, p) in self.0.iter().enumerate() {
            // within one position the term order alone decides
            if let Some((m, c)) = p.leading(&mo.terms) {
                best = match best {
                    Some(b) if mo.cmp((b.0, b.1), (i, m)) != Ordering::Less => Some(b),
                    _ => Some((i, m, c)),
                };
            }
        }
        best.map(|(i, m, c)| (i, m.clone(), c.clone()))
    }

    /// Leading `(position, monomial)` under `mo`.
    pub fn lt(&self, mo: &ModuleOrder) -> Option<(usize, Mon)> {
        self.leading(mo).map(|(i, m, _)| (i, m))
    }

    /// Largest total degree among the entries.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|p| p.degree()).max().unwrap_or(crate::algebra::NEG_INF_DEGREE)
    }

    pub fn scale(&self, c: &C) -> Self {
        ModVec(self.0.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_term(&self, m: &Mon, c: &C) -> Self {
        ModVec(self.0.iter().map(|p| p.mul_term(m, c)).collect())
    }

    pub fn mul_poly(&self, q: &Poly<C>) -> Self {
        ModVec(self.0.iter().map(|p| p * q).collect())
    }

    /// `self -= c·m·other` in place.
    pub fn sub_mul_term(&mut self, other: &ModVec<C>, m: &Mon, c: &C) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.sub_mul_term(b, m, c);
        }
    }

    pub fn add(&self, o: &ModVec<C>) -> Self {
        ModVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &ModVec<C>) -> Self {
        ModVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    /// Inner product `Σ g_i f_i`.
    pub fn dot(&self, f: &[Poly<C>]) -> Poly<C> {
        let n = f.first().map_or(self.nvars(), |p| p.nvars());
        self.0.iter().zip(f).fold(Poly::zero(n), |acc, (g, fi)| &acc + &(g * fi))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, mo: &ModuleOrder) -> Self {
        match self.leading(mo) {
            Some((_, _, c)) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> ModVec<D> {
        ModVec(self.0.iter().map(|p| p.map_coeffs(&f)).collect())
    }

    /// All coefficients, entry by entry.
    pub fn coeffs(&self) -> impl Iterator<Item = &C> {
        self.0.iter().flat_map(|p| p.terms().map(|(_, c)| c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Q};

    #[test]
    fn top_and_pot_leading_terms() {
        let x1 = Poly::<Q>::var(2, 0);
        let x2sq = Poly::<Q>::var(2, 1).pow(2);
        let v = ModVec(vec![x1.clone(), x2sq.clone()]);
        let top = ModuleOrder::top(TermOrder::DegRevLex);
        let pot = ModuleOrder::pot(TermOrder::DegRevLex);
        assert_eq!(v.lt(&top), Some((1, Mon(vec![0, 2]))));
        assert_eq!(v.lt(&pot), Some((0, Mon(vec![1, 0]))));
        let w = ModVec(vec![Poly::constant(2, q(1)), Poly::constant(2, q(2))]);
        assert_eq!(w.lt(&top), Some((0, Mon(vec![0, 0]))));
    }
}
