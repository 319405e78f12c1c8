//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use super::AlgebraError;

/// Exponent vector over the full symbol table. Negative entries are only
/// produced by divided systems (rational monomials).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mon(pub Vec<i32>);

impl Mon {
    pub fn one(n: usize) -> Self {
        Mon(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Mon(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Total degree restricted to the index range `range`.
    pub fn degree_in(&self, range: std::ops::Range<usize>) -> i64 {
        self.0[range].iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, o: &Mon) -> Mon {
        Mon(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// Exponent difference `self / o` (may contain negative entries).
    pub fn div(&self, o: &Mon) -> Mon {
        Mon(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn divides(&self, o: &Mon) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, o: &Mon) -> Mon {
        Mon(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, o: &Mon) -> Mon {
        Mon(self.0.iter().zip(&o.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, o: &Mon) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All non-negative exponent vectors in `n` variables of total degree
    /// at most `d`, ordered by degree then lexicographically.
    pub fn all_up_to_degree(n: usize, d: i64) -> Vec<Mon> {
        let mut out = Vec::new();
        for deg in 0..=d.max(-1) {
            let mut cur = vec![0i32; n];
            fill(&mut out, &mut cur, 0, deg as i32);
        }
        out
    }
}

fn fill(out: &mut Vec<Mon>, cur: &mut Vec<i32>, i: usize, left: i32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Mon(Vec::new()));
        }
        return;
    }
    if i == cur.len() - 1 {
        cur[i] = left;
        out.push(Mon(cur.clone()));
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(out, cur, i + 1, left - e);
    }
    cur[i] = 0;
}

/// Monomial order on exponent vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    /// Lexicographic with symbol 0 largest.
    Lex,
    /// Graded reverse lexicographic.
    DegRevLex,
    /// Two degrevlex blocks `[0, split)` and `[split, n)`. When
    /// `first_dominates` the first block is compared first (e.g. `k > x` with
    /// parameters first), otherwise the second block is.
    Block { split: usize, first_dominates: bool },
}

impl TermOrder {
    /// The default order for model polynomials: parameters below variables.
    pub fn params_below(nparams: usize) -> Self {
        TermOrder::Block { split: nparams, first_dominates: false }
    }

    /// Elimination order with parameters above variables.
    pub fn params_above(nparams: usize) -> Self {
        TermOrder::Block { split: nparams, first_dominates: true }
    }

    /// Compares two exponent vectors; assumes non-negative entries.
    pub fn cmp(&self, a: &Mon, b: &Mon) -> Ordering {
        match *self {
            TermOrder::Lex => a.0.cmp(&b.0),
            TermOrder::DegRevLex => degrevlex(&a.0, &b.0),
            TermOrder::Block { split, first_dominates } => {
                let (a1, a2) = a.0.split_at(split);
                let (b1, b2) = b.0.split_at(split);
                if first_dominates {
                    degrevlex(a1, b1).then_with(|| degrevlex(a2, b2))
                } else {
                    degrevlex(a2, b2).then_with(|| degrevlex(a1, b1))
                }
            }
        }
    }

    /// Checked comparison that rejects negative exponents and length
    /// mismatches.
    pub fn compare(&self, a: &Mon, b: &Mon) -> Result<Ordering, AlgebraError> {
        if a.nvars() != b.nvars() {
            return Err(AlgebraError::SymbolMismatch(a.nvars(), b.nvars()));
        }
        if !a.is_nonneg() || !b.is_nonneg() {
            return Err(AlgebraError::NegativeExponent);
        }
        Ok(self.cmp(a, b))
    }
}

pub(crate) fn degrevlex(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for (x, y) in a.iter().zip(b).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}
