//! Rational-monomial conservation laws: `x^m` is conserved exactly when `m`
//! is a linear conservation law of the divided system `ẋ_i = f_i / x_i`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::linalg::integer_left_kernel;
use crate::algebra::{Mon, Poly, Q};
use crate::model_io::{crn_of, CrnForm, ModelError, OdeModel};

/// Exponent vector `m` of the law `x_1^{m_1} ⋯ x_n^{m_n}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonomialLaw {
    pub exponents: Vec<BigInt>,
}

impl MonomialLaw {
    pub fn from_i64(m: &[i64]) -> Self {
        MonomialLaw { exponents: m.iter().map(|&e| BigInt::from(e)).collect() }
    }

    /// Exponents over the full symbol table (`r` leading parameters).
    pub fn to_mon(&self, r: usize) -> Mon {
        let mut e = vec![0; r];
        e.extend(self.exponents.iter().map(|x| x.to_i32().expect("exponent fits in i32")));
        Mon(e)
    }

    /// Text such as `x1*x2*x3` or `x1*x2^-1`.
    pub fn to_text(&self, vars: &[String]) -> String {
        let e: Vec<i32> = self.exponents.iter().map(|x| x.to_i32().expect("exponent fits in i32")).collect();
        crate::algebra::poly::mono_text(&Mon(e), vars)
    }

    /// True when every exponent is non-negative (a polynomial law).
    pub fn is_polynomial(&self) -> bool {
        self.exponents.iter().all(|e| *e >= BigInt::zero())
    }
}

/// The system `ẋ_i = f_i / x_i`, with negative exponents where `x_i ∤ f_i`.
pub fn divided_system(m: &OdeModel) -> OdeModel {
    let (r, nsym) = (m.r(), m.nsym());
    let mut out = m.clone();
    for (i, f) in out.rhs.iter_mut().enumerate() {
        let mut e = vec![0; nsym];
        e[r + i] = -1;
        *f = f.mul_term(&Mon(e), &Q::from_integer(1.into()));
    }
    out
}

/// Divided system, its reaction-network form and the monomial laws.
#[derive(Clone, Debug)]
pub struct MonomialReport {
    pub divided: OdeModel,
    /// Values of fresh rate symbols when numeric splitting was needed.
    pub split_values: Option<Vec<Q>>,
    pub crn: CrnForm,
    pub laws: Vec<MonomialLaw>,
}

/// Generators of the integer left kernel of `S'` for the divided system, in
/// reduced echelon form with the first nonzero exponent positive.
pub fn monomial_basis(m: &OdeModel) -> Result<MonomialReport, ModelError> {
    let divided = divided_system(m);
    let (divided, crn, split_values) = crn_of(&divided)?;
    let laws = integer_left_kernel(&crn.stoich, crn.n(), crn.reactions())
        .into_iter()
        .map(|exponents| MonomialLaw { exponents })
        .collect();
    Ok(MonomialReport { divided, split_values, crn, laws })
}

/// `Σ m_i f_i / x_i` as a Laurent polynomial; zero exactly for laws.
pub fn log_derivative(m: &OdeModel, law: &MonomialLaw) -> Poly<Q> {
    let d = divided_system(m);
    d.rhs
        .iter()
        .zip(&law.exponents)
        .fold(Poly::zero(m.nsym()), |acc, (g, e)| &acc + &g.scale(&Q::from_integer(e.clone())))
}

/// Exact check that `x^m` is a first integral of `m`.
pub fn verify_monomial(m: &OdeModel, law: &MonomialLaw) -> bool {
    log_derivative(m, law).is_zero()
}
