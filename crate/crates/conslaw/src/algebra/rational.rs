//! Exact rational scalars and the [`Field`] abstraction shared by every
//! polynomial coefficient domain.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Q = num_rational::BigRational;

/// Builds the integer `n` as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Builds `n/d` as a rational. Panics when `d == 0`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"7"`, `"-3/2"` or `"0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", int_digits, frac);
        let mut n: BigInt = digits.parse().ok()?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Q::new(n, d));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Gcd of the numerators of `xs` (0 for an empty or all-zero slice).
pub fn numerator_gcd<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()))
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive. Returns `None` for the zero vector.
pub fn primitive_integer_vector(v: &[Q]) -> Option<Vec<BigInt>> {
    let first = v.iter().find(|x| !Zero::is_zero(*x))?;
    let l = denominator_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if first.is_negative() {
        g = -g;
    }
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Coefficient field interface used by polynomials, Gröbner bases and linear
/// algebra. Implemented for [`Q`] and for rational functions in the
/// parameters.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
    fn from_q(x: &Q) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_q(&q(n))
    }
    /// True when the element is a rational constant (always true for `Q`).
    fn is_rational(&self) -> bool;
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn is_rational(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("3/2"), Some(qf(3, 2)));
        assert_eq!(parse_rational("-4/6"), Some(qf(-2, 3)));
        assert_eq!(parse_rational("0.125"), Some(qf(1, 8)));
        assert_eq!(parse_rational("-1.5"), Some(qf(-3, 2)));
        assert_eq!(parse_rational("12"), Some(q(12)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![qf(-1, 2), q(0), qf(3, 4)];
        let p = primitive_integer_vector(&v).unwrap();
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(0), BigInt::from(-3)]);
        assert!(primitive_integer_vector(&[q(0)]).is_none());
    }
}
