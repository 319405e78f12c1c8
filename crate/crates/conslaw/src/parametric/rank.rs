//! Rank of polynomial matrices with case splitting on the vanishing of
//! entries, giving a disjoint decomposition of parameter space.

use crate::algebra::linalg::rank;
use crate::algebra::{poly_gcd, Poly, Q};

use super::{Constraint, Knowledge, SignContext, ATOM_ORDER};

/// One case: on the set defined by `gamma` the matrix has rank `rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCase {
    pub gamma: Constraint,
    pub rank: usize,
}

/// Cases whose sets are pairwise disjoint and cover the symbol space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDecomposition {
    pub cases: Vec<RankCase>,
}

impl RankDecomposition {
    /// Conditions of all cases with rank `r` (a disjunction).
    pub fn disjunction_for(&self, r: usize) -> Vec<Constraint> {
        self.cases.iter().filter(|c| c.rank == r).map(|c| c.gamma.clone()).collect()
    }

    /// Indices of the cases satisfied at `point`.
    pub fn matching(&self, point: &[Q]) -> Vec<usize> {
        self.cases.iter().enumerate().filter(|(_, c)| c.gamma.holds_at(point)).map(|(i, _)| i).collect()
    }

    /// Checks at `point` that exactly one case holds and that its rank is the
    /// rank of the evaluated matrix.
    pub fn validate_at(&self, a: &[Vec<Poly<Q>>], point: &[Q]) -> bool {
        let hits = self.matching(point);
        if hits.len() != 1 {
            return false;
        }
        let m: Vec<Vec<Q>> = a.iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect();
        rank(&m) == self.cases[hits[0]].rank
    }
}

type Matrix = Vec<Vec<Poly<Q>>>;

/// Stack-based rank computation: pivots are searched row by row, first for
/// an entry provably nonzero under the current case, otherwise the first
/// entry not provably zero is split on (`≠ 0` pushed first, then `= 0` with
/// the entry cleared). Inconsistent cases are dropped.
pub fn parametric_rank(a: &[Vec<Poly<Q>>], ctx: &SignContext) -> RankDecomposition {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut stack: Vec<(Constraint, Matrix, usize)> = vec![(Constraint::truth(), a.to_vec(), 0)];
    let mut cases = Vec::new();
    while let Some((gamma, mut m, p)) = stack.pop() {
        let know = Knowledge::new(&gamma, ctx);
        if know.is_inconsistent() {
            continue;
        }
        let cells = || (p..rows).flat_map(move |i| (p..cols).map(move |j| (i, j)));
        if let Some((pi, pj)) = cells().find(|&(i, j)| know.proves_nonzero(&m[i][j])) {
            m.swap(p, pi);
            for row in m.iter_mut() {
                row.swap(p, pj);
            }
            eliminate_below(&mut m, p, &know);
            stack.push((gamma, m, p + 1));
        } else if let Some((i, j)) = cells().find(|&(i, j)| !know.proves_zero(&m[i][j])) {
            let entry = m[i][j].clone();
            stack.push((gamma.and_nonzero(&entry), m.clone(), p));
            m[i][j] = Poly::zero(entry.nvars());
            stack.push((gamma.and_zero(&entry), m, p));
        } else {
            cases.push(RankCase { gamma, rank: p });
        }
    }
    RankDecomposition { cases }
}

/// Fraction-free elimination below the pivot at `(p, p)`; each new row is
/// divided by its content when that is provably nonzero.
fn eliminate_below(m: &mut Matrix, p: usize, know: &Knowledge) {
    let cols = m[p].len();
    let piv = m[p][p].clone();
    for i in p + 1..m.len() {
        let a = m[i][p].clone();
        if know.proves_zero(&a) {
            m[i][p] = Poly::zero(a.nvars());
            continue;
        }
        #[allow(clippy::needless_range_loop)] // reads row p while writing row i
        for j in p..cols {
            let v = &(&piv * &m[i][j]) - &(&a * &m[p][j]);
            m[i][j] = if know.proves_zero(&v) { Poly::zero(v.nvars()) } else { v };
        }
        simplify_row(&mut m[i][p + 1..], know);
    }
}

fn simplify_row(row: &mut [Poly<Q>], know: &Knowledge) {
    let nz: Vec<&Poly<Q>> = row.iter().filter(|e| !e.is_zero()).collect();
    if nz.is_empty() {
        return;
    }
    let mut g = nz[0].clone();
    for e in &nz[1..] {
        g = poly_gcd(&g, e);
        if g.is_constant() {
            break;
        }
    }
    // rational content of the row
    let content = {
        let l = crate::algebra::rational::denominator_lcm(nz.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
        let scaled: Vec<Poly<Q>> = nz.iter().map(|p| p.scale(&Q::from_integer(l.clone()))).collect();
        let n = crate::algebra::rational::numerator_gcd(scaled.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
        Q::new(l, n)
    };
    let divisor = if !g.is_constant() && know.proves_nonzero(&g) { Some(g) } else { None };
    for e in row.iter_mut() {
        if e.is_zero() {
            continue;
        }
        let mut v = e.scale(&content);
        if let Some(d) = &divisor {
            v = v.div_exact(d, &ATOM_ORDER).expect("gcd divides every entry");
        }
        *e = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, SymbolTable};
    use crate::model_io::parse_poly;

    fn mat(rows: &[&[&str]], t: &SymbolTable) -> Matrix {
        rows.iter().map(|r| r.iter().map(|s| parse_poly(s, t).unwrap()).collect()).collect()
    }

    #[test]
    fn small_cases() {
        let t = SymbolTable::from_strs(&["v1"], &[]);
        let id = mat(&[&["1", "0"], &["0", "1"]], &t);
        let d = parametric_rank(&id, &SignContext::free(1));
        assert_eq!(d.cases, vec![RankCase { gamma: Constraint::truth(), rank: 2 }]);
        let single = mat(&[&["v1"]], &t);
        let d = parametric_rank(&single, &SignContext::free(1));
        let mut ranks: Vec<(String, usize)> = d.cases.iter().map(|c| (c.gamma.to_text(&t.names()), c.rank)).collect();
        ranks.sort();
        assert_eq!(ranks, vec![("v1 != 0".to_string(), 1), ("v1 = 0".to_string(), 0)]);
        for v in [q(0), q(2), q(-1)] {
            assert!(d.validate_at(&single, &[v]));
        }
    }
}
