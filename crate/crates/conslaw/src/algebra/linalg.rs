//! Exact linear algebra over a [`Field`]: dense row reduction, kernels and an
//! incremental sparse echelon form with dependency tracking.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::rational::{primitive_integer_vector, Field, Q};

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// columns.
pub fn rref<C: Field>(m: &mut [Vec<C>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                #[allow(clippy::needless_range_loop)] // reads row r while writing row i
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let t = m[i][j].sub(&f.mul(&m[r][j]));
                        m[i][j] = t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a dense matrix.
pub fn rank<C: Field>(m: &[Vec<C>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of the right kernel `{v : M v = 0}` for an `rows x ncols` matrix.
pub fn right_kernel<C: Field>(m: &[Vec<C>], ncols: usize) -> Vec<Vec<C>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![C::zero(); ncols];
            v[f] = C::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = a[r][f].neg();
            }
            v
        })
        .collect()
}

/// Basis of the left kernel `{c : c M = 0}` for an `nrows x ncols` matrix.
pub fn left_kernel<C: Field>(m: &[Vec<C>], nrows: usize, ncols: usize) -> Vec<Vec<C>> {
    let t: Vec<Vec<C>> = (0..ncols).map(|j| (0..nrows).map(|i| m[i][j].clone()).collect()).collect();
    right_kernel(&t, nrows)
}

/// Integer matrix to rationals.
pub fn int_to_q(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|&x| super::rational::q(x)).collect()).collect()
}

/// Left kernel of an integer matrix as primitive integer rows whose first
/// nonzero entry is positive, in reduced-echelon-derived order.
pub fn integer_left_kernel(m: &[Vec<i64>], nrows: usize, ncols: usize) -> Vec<Vec<BigInt>> {
    let qm = int_to_q(m);
    let mut ker = left_kernel(&qm, nrows, ncols);
    // canonical basis: reduced echelon form of the kernel rows
    rref(&mut ker);
    ker.iter().filter_map(|v| primitive_integer_vector(v)).collect()
}

/// Sparse vector keyed by an ordered index.
pub type SparseVec<K, C> = BTreeMap<K, C>;

/// Result of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug)]
pub enum Insert<C> {
    /// The vector extended the span; payload is the new row index.
    Independent(usize),
    /// The vector was dependent; payload is a relation `Σ c_i input_i = 0`
    /// over insertion ids (empty unless tracking is enabled).
    Dependent(BTreeMap<usize, C>),
}

/// Incremental echelon form: rows are kept with distinct leading (largest)
/// keys and pivot coefficient one.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone, C: Field> {
    rows: Vec<SparseVec<K, C>>,
    combos: Vec<BTreeMap<usize, C>>,
    pivot_of: BTreeMap<K, usize>,
    track: bool,
    next_id: usize,
}

impl<K: Ord + Clone, C: Field> Echelon<K, C> {
    pub fn new(track: bool) -> Self {
        Echelon { rows: Vec::new(), combos: Vec::new(), pivot_of: BTreeMap::new(), track, next_id: 0 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<K, C>] {
        &self.rows
    }

    /// Combination of inputs that produced row `i` (tracking only).
    pub fn combo(&self, i: usize) -> &BTreeMap<usize, C> {
        &self.combos[i]
    }

    /// Top-reduces `v` against the current rows, returning the remainder
    /// and the accumulated combination.
    fn reduce(&self, mut v: SparseVec<K, C>, mut combo: BTreeMap<usize, C>) -> (SparseVec<K, C>, BTreeMap<usize, C>) {
        while let Some((k, a)) = v.iter().next_back() {
            let Some(&r) = self.pivot_of.get(k) else { break };
            let a = a.clone();
            axpy(&mut v, &self.rows[r], &a.neg());
            if self.track {
                axpy(&mut combo, &self.combos[r], &a.neg());
            }
        }
        (v, combo)
    }

    /// Tests membership in the current span without modifying it.
    pub fn contains(&self, v: &SparseVec<K, C>) -> bool {
        self.reduce(v.clone(), BTreeMap::new()).0.is_empty()
    }

    /// Inserts a vector; dependent vectors leave the echelon unchanged.
    pub fn insert(&mut self, v: SparseVec<K, C>) -> Insert<C> {
        let id = self.next_id;
        self.next_id += 1;
        let mut combo = BTreeMap::new();
        if self.track {
            combo.insert(id, C::one());
        }
        let (mut v, mut combo) = self.reduce(v, combo);
        match v.iter().next_back() {
            None => Insert::Dependent(combo),
            Some((k, a)) => {
                let k = k.clone();
                let inv = a.inv();
                scale(&mut v, &inv);
                scale(&mut combo, &inv);
                self.rows.push(v);
                self.combos.push(combo);
                self.pivot_of.insert(k, self.rows.len() - 1);
                Insert::Independent(self.rows.len() - 1)
            }
        }
    }

    /// Back-substitutes so every pivot key appears in exactly one row, then
    /// returns rows sorted by decreasing pivot key.
    pub fn reduced_rows(&self) -> Vec<(SparseVec<K, C>, BTreeMap<usize, C>)> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by(|&a, &b| self.lead(b).cmp(self.lead(a)));
        let mut rows: Vec<SparseVec<K, C>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let mut combos: Vec<BTreeMap<usize, C>> = order.iter().map(|&i| self.combos[i].clone()).collect();
        let leads: Vec<K> = rows.iter().map(|r| r.keys().next_back().unwrap().clone()).collect();
        for i in (0..rows.len()).rev() {
            for j in 0..i {
                if let Some(a) = rows[j].get(&leads[i]).cloned() {
                    let (ri, ci) = (rows[i].clone(), combos[i].clone());
                    axpy(&mut rows[j], &ri, &a.neg());
                    if self.track {
                        axpy(&mut combos[j], &ci, &a.neg());
                    }
                }
            }
        }
        rows.into_iter().zip(combos).collect()
    }

    fn lead(&self, i: usize) -> &K {
        self.rows[i].keys().next_back().expect("nonzero row")
    }
}

/// `v += a * w` on sparse vectors.
pub fn axpy<K: Ord + Clone, C: Field>(v: &mut SparseVec<K, C>, w: &SparseVec<K, C>, a: &C) {
    if a.is_zero() {
        return;
    }
    for (k, x) in w {
        let t = x.mul(a);
        match v.get_mut(k) {
            Some(y) => {
                let s = y.add(&t);
                if s.is_zero() {
                    v.remove(k);
                } else {
                    *y = s;
                }
            }
            None => {
                v.insert(k.clone(), t);
            }
        }
    }
}

fn scale<K: Ord + Clone, C: Field>(v: &mut SparseVec<K, C>, a: &C) {
    for x in v.values_mut() {
        *x = x.mul(a);
    }
}
