//! Buchberger's algorithm for submodules of `R^m` (ideals are the case
//! `m = 1`) with Gebauer–Möller pair pruning and optional cofactor tracking.

use std::cmp::Ordering;

use crate::algebra::{Field, Mon, Poly, TermOrder};

use super::module::{ModVec, ModuleOrder};

/// Callbacks used by comprehensive Gröbner systems: coefficient
/// normalization modulo parameter equations and inspection of every element
/// added to the basis.
pub trait GbHook<C: Field> {
    /// True when [`GbHook::normalize`] must be applied to coefficients.
    fn is_active(&self) -> bool {
        false
    }
    /// Canonical representative of a coefficient.
    fn normalize(&self, c: &C) -> C {
        c.clone()
    }
    /// Called with every new basis element before it is made monic.
    fn on_new_element(&mut self, _g: &ModVec<C>) {}
}

/// Hook that does nothing.
pub struct NoHook;

impl<C: Field> GbHook<C> for NoHook {}

/// Reduced Gröbner basis, sorted ascending by leading term, together with
/// cofactors `basis[j] = Σ_i cofactors[j][i]·gens[i]` when tracking.
#[derive(Clone, Debug)]
pub struct GbResult<C: Field> {
    pub basis: Vec<ModVec<C>>,
    pub cofactors: Option<Vec<Vec<Poly<C>>>>,
}

struct Elem<C: Field> {
    v: ModVec<C>,
    cof: Vec<Poly<C>>,
    pos: usize,
    lm: Mon,
}

struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Mon,
}

/// Computes the reduced Gröbner basis of the submodule generated by `gens`.
pub fn module_gb<C: Field, H: GbHook<C> + ?Sized>(
    gens: &[ModVec<C>],
    mo: &ModuleOrder,
    track: bool,
    hook: &mut H,
) -> GbResult<C> {
    let nin = gens.len();
    let nvars = gens.first().map_or(0, |g| g.nvars());
    let ideal = gens.first().is_none_or(|g| g.rank() == 1);
    let unit = |i: usize| -> Vec<Poly<C>> {
        if !track {
            return Vec::new();
        }
        let mut c = vec![Poly::zero(nvars); nin];
        c[i] = Poly::one(nvars);
        c
    };

    // inputs are inserted in ascending order of their leading terms
    let mut inputs: Vec<(usize, ModVec<C>)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut v = g.clone();
        if hook.is_active() {
            normalize_all(&mut v, hook);
        }
        if !v.is_zero() {
            inputs.push((i, v));
        }
    }
    inputs.sort_by(|a, b| {
        let la = a.1.lt(mo).unwrap();
        let lb = b.1.lt(mo).unwrap();
        mo.cmp((la.0, &la.1), (lb.0, &lb.1))
    });

    let mut elems: Vec<Elem<C>> = Vec::new();
    let mut gset: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for (i, v) in inputs {
        let mut v = v;
        let mut cof = unit(i);
        reduce(&mut v, track.then_some(&mut cof), &elems, &gset, mo, hook, false);
        if v.is_zero() {
            continue;
        }
        let h = push_elem(&mut elems, v, cof, mo, hook);
        update(&mut gset, &mut pairs, &elems, h, ideal);
    }

    while !pairs.is_empty() {
        let k = select(&pairs, mo);
        let p = pairs.swap_remove(k);
        let (a, b) = (&elems[p.i], &elems[p.j]);
        let ta = p.lcm.div(&a.lm);
        let tb = p.lcm.div(&b.lm);
        let one = C::one();
        let mut s = a.v.mul_term(&ta, &one);
        s.sub_mul_term(&b.v, &tb, &one);
        let mut cof = Vec::new();
        if track {
            cof = a.cof.iter().map(|c| c.mul_term(&ta, &one)).collect();
            for (c, d) in cof.iter_mut().zip(&b.cof) {
                c.sub_mul_term(d, &tb, &one);
            }
        }
        reduce(&mut s, track.then_some(&mut cof), &elems, &gset, mo, hook, false);
        if s.is_zero() {
            continue;
        }
        let h = push_elem(&mut elems, s, cof, mo, hook);
        update(&mut gset, &mut pairs, &elems, h, ideal);
    }

    // interreduce the minimal basis
    // (element, cofactors, leading position, leading monomial)
    type Reduced<C> = (ModVec<C>, Vec<Poly<C>>, usize, Mon);
    let mut out: Vec<Reduced<C>> = Vec::new();
    for &g in &gset {
        let others: Vec<usize> = gset.iter().copied().filter(|&o| o != g).collect();
        let mut v = elems[g].v.clone();
        let mut cof = elems[g].cof.clone();
        reduce(&mut v, track.then_some(&mut cof), &elems, &others, mo, hook, true);
        out.push((v, cof, elems[g].pos, elems[g].lm.clone()));
    }
    out.sort_by(|a, b| mo.cmp((a.2, &a.3), (b.2, &b.3)));
    let cofactors = track.then(|| out.iter().map(|e| e.1.clone()).collect());
    GbResult { basis: out.into_iter().map(|e| e.0).collect(), cofactors }
}

fn normalize_all<C: Field, H: GbHook<C> + ?Sized>(v: &mut ModVec<C>, hook: &H) {
    for p in v.0.iter_mut() {
        *p = Poly::from_terms(p.nvars(), p.terms().map(|(m, c)| (m.clone(), hook.normalize(c))));
    }
}

fn push_elem<C: Field, H: GbHook<C> + ?Sized>(
    elems: &mut Vec<Elem<C>>,
    v: ModVec<C>,
    cof: Vec<Poly<C>>,
    mo: &ModuleOrder,
    hook: &mut H,
) -> usize {
    hook.on_new_element(&v);
    let (pos, lm, lc) = v.leading(mo).expect("nonzero element");
    let inv = lc.inv();
    let v = v.scale(&inv);
    let cof = cof.iter().map(|c| c.scale(&inv)).collect();
    elems.push(Elem { v, cof, pos, lm });
    elems.len() - 1
}

/// Leading term of `v` after normalizing leading coefficients with `hook`.
fn normalized_leading<C: Field, H: GbHook<C> + ?Sized>(
    v: &mut ModVec<C>,
    mo: &ModuleOrder,
    hook: &H,
) -> Option<(usize, Mon, C)> {
    loop {
        let (i, m, c) = v.leading(mo)?;
        if !hook.is_active() {
            return Some((i, m, c));
        }
        let nc = hook.normalize(&c);
        if nc.is_zero() {
            v.0[i].remove_term(&m);
            continue;
        }
        v.0[i].set_term(m.clone(), nc.clone());
        return Some((i, m, nc));
    }
}

/// Full reduction of `v` by the elements `elems[red]` (monic). With
/// `skip_lead` the leading term is kept and only the tail is reduced.
fn reduce<C: Field, H: GbHook<C> + ?Sized>(
    v: &mut ModVec<C>,
    mut cof: Option<&mut Vec<Poly<C>>>,
    elems: &[Elem<C>],
    red: &[usize],
    mo: &ModuleOrder,
    hook: &H,
    skip_lead: bool,
) {
    let mut done = ModVec::zero(v.rank(), v.nvars());
    let mut first = skip_lead;
    while let Some((i, m, c)) = normalized_leading(v, mo, hook) {
        let divisor =
            if first { None } else { red.iter().map(|&r| &elems[r]).find(|e| e.pos == i && e.lm.divides(&m)) };
        first = false;
        match divisor {
            Some(e) => {
                let t = m.div(&e.lm);
                v.sub_mul_term(&e.v, &t, &c);
                if let Some(cof) = cof.as_deref_mut() {
                    for (a, b) in cof.iter_mut().zip(&e.cof) {
                        a.sub_mul_term(b, &t, &c);
                    }
                }
            }
            None => {
                v.0[i].remove_term(&m);
                done.0[i].add_term(m, c);
            }
        }
    }
    *v = done;
}

fn select(pairs: &[Pair], mo: &ModuleOrder) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let o = mo.cmp((a.pos, &a.lcm), (b.pos, &b.lcm)).then((a.i, a.j).cmp(&(b.i, b.j)));
        if o == Ordering::Less {
            best = k;
        }
    }
    best
}

/// Gebauer–Möller update after adding element `h`.
fn update<C: Field>(gset: &mut Vec<usize>, pairs: &mut Vec<Pair>, elems: &[Elem<C>], h: usize, ideal: bool) {
    let (hp, hm) = (elems[h].pos, &elems[h].lm);
    let coprime = |g: usize| ideal && hm.coprime(&elems[g].lm);
    let mut cands: Vec<(usize, Mon)> =
        gset.iter().copied().filter(|&g| elems[g].pos == hp).map(|g| (g, hm.lcm(&elems[g].lm))).collect();
    let mut kept: Vec<(usize, Mon)> = Vec::new();
    while let Some((g1, l1)) = cands.pop() {
        let dominated = cands.iter().chain(kept.iter()).any(|(_, l2)| l2.divides(&l1));
        if coprime(g1) || !dominated {
            kept.push((g1, l1));
        }
    }
    pairs.retain(|p| {
        if p.pos != hp || !hm.divides(&p.lcm) {
            return true;
        }
        let l1 = hm.lcm(&elems[p.i].lm);
        let l2 = hm.lcm(&elems[p.j].lm);
        l1 == p.lcm || l2 == p.lcm
    });
    for (g, l) in kept {
        if !coprime(g) {
            pairs.push(Pair { i: g.min(h), j: g.max(h), pos: hp, lcm: l });
        }
    }
    gset.retain(|&g| !(elems[g].pos == hp && hm.divides(&elems[g].lm)));
    gset.push(h);
}

/// Reduced Gröbner basis of a polynomial ideal.
pub fn buchberger<C: Field>(gens: &[Poly<C>], order: &TermOrder) -> Vec<Poly<C>> {
    let mo = ModuleOrder::top(*order);
    let vs: Vec<ModVec<C>> = gens.iter().map(|p| ModVec::scalar(p.clone())).collect();
    module_gb(&vs, &mo, false, &mut NoHook).basis.into_iter().map(|v| v.0.into_iter().next().unwrap()).collect()
}

/// Reduced Gröbner basis of an ideal with cofactors expressing each basis
/// element in terms of `gens`.
pub fn buchberger_with_cofactors<C: Field>(gens: &[Poly<C>], order: &TermOrder) -> (Vec<Poly<C>>, Vec<Vec<Poly<C>>>) {
    let mo = ModuleOrder::top(*order);
    let vs: Vec<ModVec<C>> = gens.iter().map(|p| ModVec::scalar(p.clone())).collect();
    let r = module_gb(&vs, &mo, true, &mut NoHook);
    (r.basis.into_iter().map(|v| v.0.into_iter().next().unwrap()).collect(), r.cofactors.unwrap())
}

/// Remainder of `p` after full reduction by `basis` (unique when `basis` is
/// a Gröbner basis).
pub fn normal_form<C: Field>(p: &Poly<C>, basis: &[Poly<C>], order: &TermOrder) -> Poly<C> {
    divide(p, basis, order).1
}

/// Division with quotients: `p = Σ q_j basis_j + r`, choosing at each step the
/// first basis element whose leading monomial divides.
pub fn divide<C: Field>(p: &Poly<C>, basis: &[Poly<C>], order: &TermOrder) -> (Vec<Poly<C>>, Poly<C>) {
    divide_with(p, basis, order, &NoHook)
}

/// [`divide`] with leading coefficients normalized by `hook` first.
pub fn divide_with<C: Field, H: GbHook<C> + ?Sized>(
    p: &Poly<C>,
    basis: &[Poly<C>],
    order: &TermOrder,
    hook: &H,
) -> (Vec<Poly<C>>, Poly<C>) {
    let n = p.nvars();
    let leads: Vec<(Mon, C)> =
        basis.iter().map(|b| b.leading(order).map(|(m, c)| (m.clone(), c.inv())).expect("nonzero divisor")).collect();
    let mut quo = vec![Poly::zero(n); basis.len()];
    let mut rem = Poly::zero(n);
    let mut r = p.clone();
    while let Some((m, c)) = r.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
        let c = if hook.is_active() { hook.normalize(&c) } else { c };
        if c.is_zero() {
            r.remove_term(&m);
            continue;
        }
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(j) => {
                let t = m.div(&leads[j].0);
                let k = c.mul(&leads[j].1);
                r.remove_term(&m);
                let mut tail = basis[j].clone();
                tail.remove_term(&leads[j].0);
                r.sub_mul_term(&tail, &t, &k);
                quo[j].add_term(t, k);
            }
            None => {
                r.remove_term(&m);
                rem.add_term(m, c);
            }
        }
    }
    (quo, rem)
}

/// Remainder of a module vector after full reduction by `basis`.
pub fn module_normal_form<C: Field>(v: &ModVec<C>, basis: &[ModVec<C>], mo: &ModuleOrder) -> ModVec<C> {
    let elems: Vec<Elem<C>> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let b = b.monic(mo);
            let (pos, lm) = b.lt(mo).unwrap();
            Elem { v: b, cof: Vec::new(), pos, lm }
        })
        .collect();
    let idx: Vec<usize> = (0..elems.len()).collect();
    let mut w = v.clone();
    reduce(&mut w, None, &elems, &idx, mo, &NoHook, false);
    w
}

/// S-vector of two module elements with equal leading positions.
pub fn s_vector<C: Field>(a: &ModVec<C>, b: &ModVec<C>, mo: &ModuleOrder) -> Option<ModVec<C>> {
    let (pa, ma, ca) = a.leading(mo)?;
    let (pb, mb, cb) = b.leading(mo)?;
    if pa != pb {
        return None;
    }
    let l = ma.lcm(&mb);
    let mut s = a.mul_term(&l.div(&ma), &ca.inv());
    s.sub_mul_term(b, &l.div(&mb), &cb.inv());
    Some(s)
}

/// Checks the Buchberger criterion: every S-vector reduces to zero.
pub fn is_groebner<C: Field>(basis: &[ModVec<C>], mo: &ModuleOrder) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if let Some(s) = s_vector(&basis[i], &basis[j], mo) {
                if !module_normal_form(&s, basis, mo).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// True when no leading term divides a term of another element.
pub fn is_reduced<C: Field>(basis: &[ModVec<C>], mo: &ModuleOrder) -> bool {
    for (i, a) in basis.iter().enumerate() {
        let Some((pa, ma)) = a.lt(mo) else { return false };
        for (j, b) in basis.iter().enumerate() {
            if i != j && b.0[pa].terms().any(|(m, _)| ma.divides(m)) {
                return false;
            }
        }
    }
    true
}
