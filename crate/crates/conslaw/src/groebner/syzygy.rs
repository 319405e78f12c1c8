//! Syzygy modules via cofactor tracking, Schreyer lifting and the
//! conversion matrices between a generating set and its Gröbner basis.

use crate::algebra::{Field, Poly, TermOrder};

use super::buchberger::{divide_with, module_gb, GbHook, NoHook};
use super::module::{ModVec, ModuleOrder};

/// Generators of `Syz(F)` together with the order they are reduced under.
#[derive(Clone, Debug)]
pub struct SyzygyBasis<C: Field> {
    pub generators: Vec<ModVec<C>>,
    pub basis_of: Vec<Poly<C>>,
    pub order: ModuleOrder,
}

impl<C: Field> SyzygyBasis<C> {
    /// True when every generator annihilates `basis_of` exactly.
    pub fn verify(&self) -> bool {
        self.generators.iter().all(|g| g.dot(&self.basis_of).is_zero())
    }
}

/// Gröbner basis `G` of `⟨F⟩` with matrices `B1` (`s x m`) and `B2`
/// (`m x s`) such that `G·B1 = Fᵀ` and `F·B2 = Gᵀ`.
#[derive(Clone, Debug)]
pub struct Conversion<C: Field> {
    pub basis: Vec<Poly<C>>,
    pub b1: Vec<Vec<Poly<C>>>,
    pub b2: Vec<Vec<Poly<C>>>,
}

/// Computes the reduced Gröbner basis of `⟨F⟩` and both conversion matrices.
pub fn conversion<C: Field>(f: &[Poly<C>], order: &TermOrder) -> Conversion<C> {
    conversion_with(f, order, &mut NoHook)
}

/// [`conversion`] with coefficient normalization and inspection by `hook`.
pub fn conversion_with<C: Field, H: GbHook<C> + ?Sized>(
    f: &[Poly<C>],
    order: &TermOrder,
    hook: &mut H,
) -> Conversion<C> {
    let m = f.len();
    let mo = ModuleOrder::top(*order);
    let vs: Vec<ModVec<C>> = f.iter().map(|p| ModVec::scalar(p.clone())).collect();
    let res = module_gb(&vs, &mo, true, hook);
    let g: Vec<Poly<C>> = res.basis.into_iter().map(|v| v.0.into_iter().next().unwrap()).collect();
    let cof = res.cofactors.unwrap();
    let s = g.len();
    let b2: Vec<Vec<Poly<C>>> = (0..m).map(|i| (0..s).map(|j| cof[j][i].clone()).collect()).collect();
    let mut b1 = vec![Vec::with_capacity(m); s];
    for fi in f {
        let (qs, r) = divide_with(fi, &g, order, hook);
        debug_assert!(r.is_zero(), "generator outside its own ideal");
        for (j, qj) in qs.into_iter().enumerate() {
            b1[j].push(qj);
        }
    }
    Conversion { basis: g, b1, b2 }
}

/// Schreyer generators of `Syz(G)` for a Gröbner basis `G`: one lifted
/// S-polynomial relation per pair.
pub fn schreyer<C: Field>(g: &[Poly<C>], order: &TermOrder) -> Vec<ModVec<C>> {
    schreyer_with(g, order, &NoHook)
}

/// [`schreyer`] with coefficient normalization by `hook`.
pub fn schreyer_with<C: Field, H: GbHook<C> + ?Sized>(g: &[Poly<C>], order: &TermOrder, hook: &H) -> Vec<ModVec<C>> {
    let s = g.len();
    let leads: Vec<_> = g.iter().map(|p| p.leading(order).map(|(m, c)| (m.clone(), c.inv())).unwrap()).collect();
    let mut out = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            let l = leads[i].0.lcm(&leads[j].0);
            let ti = l.div(&leads[i].0);
            let tj = l.div(&leads[j].0);
            let mut sp = g[i].mul_term(&ti, &leads[i].1);
            sp.sub_mul_term(&g[j], &tj, &leads[j].1);
            let (qs, r) = divide_with(&sp, g, order, hook);
            debug_assert!(r.is_zero(), "not a Gröbner basis");
            let mut v = ModVec(qs.into_iter().map(|q| -&q).collect());
            v.0[i].add_term(ti, leads[i].1.clone());
            v.0[j].add_term(tj, leads[j].1.neg());
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    out
}

/// Converts syzygies of the Gröbner basis into syzygies of `F` (`B2·g`) and
/// appends the columns of `I − B2·B1`, which supply the missing elements.
pub fn convert_syzygies<C: Field>(conv: &Conversion<C>, syz_g: &[ModVec<C>], m: usize, nvars: usize) -> Vec<ModVec<C>> {
    let s = conv.basis.len();
    let mut out = Vec::new();
    for g in syz_g {
        let v = ModVec(
            (0..m).map(|i| (0..s).fold(Poly::zero(nvars), |acc, j| &acc + &(&conv.b2[i][j] * &g.0[j]))).collect(),
        );
        if !v.is_zero() {
            out.push(v);
        }
    }
    for col in 0..m {
        let mut v = ModVec::unit(m, nvars, col);
        for i in 0..m {
            let prod = (0..s).fold(Poly::zero(nvars), |acc, j| &acc + &(&conv.b2[i][j] * &conv.b1[j][col]));
            v.0[i] = &v.0[i] - &prod;
        }
        if !v.is_zero() {
            out.push(v);
        }
    }
    out
}

/// Generators of `Syz(F)` returned as the reduced module Gröbner basis under
/// term-over-position with `order`.
pub fn syzygy_basis<C: Field>(f: &[Poly<C>], nvars: usize, order: &TermOrder) -> SyzygyBasis<C> {
    let m = f.len();
    let mo = ModuleOrder::top(*order);
    let conv = conversion(f, order);
    let syz_g = schreyer(&conv.basis, order);
    let raw = convert_syzygies(&conv, &syz_g, m, nvars);
    let generators = if raw.is_empty() { Vec::new() } else { module_gb(&raw, &mo, false, &mut NoHook).basis };
    SyzygyBasis { generators, basis_of: f.to_vec(), order: mo }
}

/// Reduced module Gröbner basis of arbitrary generators under `mo`.
pub fn module_basis<C: Field>(gens: &[ModVec<C>], mo: &ModuleOrder) -> Vec<ModVec<C>> {
    let gens: Vec<ModVec<C>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Vec::new();
    }
    module_gb(&gens, mo, false, &mut NoHook).basis
}

/// True when `a` and `b` generate the same submodule (mutual reduction to
/// zero against reduced bases).
pub fn same_module<C: Field>(a: &[ModVec<C>], b: &[ModVec<C>], mo: &ModuleOrder) -> bool {
    let ga = module_basis(a, mo);
    let gb = module_basis(b, mo);
    a.iter().all(|v| super::buchberger::module_normal_form(v, &gb, mo).is_zero())
        && b.iter().all(|v| super::buchberger::module_normal_form(v, &ga, mo).is_zero())
}
