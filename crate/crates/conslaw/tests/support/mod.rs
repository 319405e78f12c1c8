//! Generators and checks shared by the property tests and the acceptance
//! harness.

#![allow(dead_code)]

use conslaw::algebra::linalg::{rank, right_kernel};
use conslaw::algebra::{q, Mon, Poly, SymbolTable, TermOrder, Q};
use conslaw::groebner::{module_normal_form, syzygy_basis, truncated_span, DegreeConvention, ModVec, ModuleOrder};
use conslaw::linear_laws::{laws_as_polys, linear_basis, stoich_rank};
use conslaw::model_io::{crn_of, CrnForm, OdeModel};
use conslaw::monomial_laws::monomial_basis;
use conslaw::parametric::{parametric_rank, Constraint, SignContext};
use conslaw::syzygy_laws::{
    conservation_laws, curl, derivative_along, gradient, integrate, verify_law, ConservationLaw, LawExpr, LawKind,
    LawOptions, Mode, Source,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MODEL_CASES: u32 = 50;
pub const STOICH_CASES: u32 = 100;
pub const POTENTIAL_CASES: u32 = 100;
pub const MATRIX_CASES: u32 = 40;
pub const RANK_POINTS: usize = 200;
pub const SYZYGY_CASES: u32 = 60;

/// Polynomial with at most `max_terms` terms of degree at most `max_deg`
/// and coefficients in `[-3, 3]`.
pub fn poly_strategy(nvars: usize, max_deg: i32, max_terms: usize) -> impl Strategy<Value = Poly<Q>> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..=max_deg, nvars)), 0..=max_terms).prop_map(
        move |terms| {
            Poly::from_terms(
                nvars,
                terms.into_iter().filter(|(_, e)| e.iter().sum::<i32>() <= max_deg).map(|(c, e)| (Mon(e), q(c))),
            )
        },
    )
}

/// One term `c·k·x^α` taken from `src` and, when `dst` is set, added to
/// `dst` (a no-op pair when they coincide).
#[derive(Clone, Debug)]
pub struct Flux {
    src: usize,
    dst: Option<usize>,
    param: Option<usize>,
    coeff: i64,
    exps: Vec<i32>,
}

fn flux_strategy(n: usize, r: usize) -> impl Strategy<Value = Flux> {
    let param = if r == 0 { Just(None).boxed() } else { prop::option::of(0..r).boxed() };
    (0..n, prop::option::of(0..n), param, 1i64..=3, prop::collection::vec(0i32..=2, n)).prop_map(
        |(src, dst, param, coeff, mut exps)| {
            while exps.iter().sum::<i32>() > 2 {
                let i = exps.iter().position(|&e| e > 0).unwrap();
                exps[i] -= 1;
            }
            Flux { src, dst, param, coeff, exps }
        },
    )
}

/// Random model with `n ≤ 4` variables, `r ≤ 3` parameters and right-hand
/// sides of degree at most 2, built from fluxes so that laws are common.
pub fn model_strategy() -> impl Strategy<Value = OdeModel> {
    (1usize..=4, 0usize..=3)
        .prop_flat_map(|(n, r)| (Just(n), Just(r), prop::collection::vec(flux_strategy(n, r), 1..=4)))
        .prop_map(|(n, r, fluxes)| {
            let params: Vec<String> = (1..=r).map(|i| format!("k{i}")).collect();
            let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let symbols = SymbolTable::new(params, vars).unwrap();
            let nsym = r + n;
            let mut rhs = vec![Poly::zero(nsym); n];
            for f in fluxes {
                let mut e = vec![0; nsym];
                if let Some(k) = f.param {
                    e[k] = 1;
                }
                e[r..].copy_from_slice(&f.exps);
                let t = Poly::term(nsym, Mon(e), q(f.coeff));
                rhs[f.src] = &rhs[f.src] - &t;
                if let Some(d) = f.dst {
                    rhs[d] = &rhs[d] + &t;
                }
            }
            OdeModel::new("random", symbols, rhs)
        })
}

/// Exact oracle: a law valid under inequations only is an identity in `Q[k, x]`.
fn identically_conserved(m: &OdeModel, law: &ConservationLaw) -> bool {
    match &law.expr {
        LawExpr::Poly(p) => !law.condition.equations.is_empty() || derivative_along(m, p).is_zero(),
        LawExpr::Monomial(_) => true,
    }
}

/// Every law of the linear, monomial and polynomial pipelines passes
/// `verify_law` and the exact identity oracle. Returns the number of laws.
pub fn check_pipeline_laws(m: &OdeModel) -> Result<usize, TestCaseError> {
    let mut laws: Vec<ConservationLaw> = Vec::new();
    if let Ok((model, crn, None)) = crn_of(m) {
        for p in laws_as_polys(&linear_basis(&crn), model.r()) {
            laws.push(ConservationLaw::polynomial(p, model.r(), Constraint::truth()));
        }
    }
    if let Ok(rep) = monomial_basis(m) {
        if rep.split_values.is_none() {
            for l in rep.laws {
                laws.push(ConservationLaw {
                    kind: LawKind::Monomial,
                    expr: LawExpr::Monomial(l),
                    condition: Constraint::truth(),
                    degree: 0,
                });
            }
        }
    }
    for (mode, source) in [
        (Mode::Generic, Source::VectorSpace),
        (Mode::Generic, Source::ModuleBasis),
        (Mode::Unconditional, Source::VectorSpace),
    ] {
        let opts = LawOptions { degree: 2, mode, source, ..LawOptions::default() };
        let rep = conservation_laws(m, &opts).map_err(|e| TestCaseError::fail(format!("{e} on {}", m.to_text())))?;
        laws.extend(rep.branches.into_iter().flat_map(|b| b.laws));
    }
    for law in &laws {
        prop_assert!(verify_law(m, law), "law {} of {}", law.to_text(m), m.to_text());
        prop_assert!(identically_conserved(m, law), "law {} of {}", law.to_text(m), m.to_text());
    }
    Ok(laws.len())
}

pub fn stoich_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(n, s)| prop::collection::vec(prop::collection::vec(-2i64..=2, s), n))
}

/// `C·S = 0` exactly for the linear basis `C`, which has `n − rank S` rows.
pub fn check_linear_basis(stoich: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let n = stoich.len();
    let s = stoich[0].len();
    let symbols =
        SymbolTable::new((1..=s).map(|j| format!("k{j}")).collect(), (1..=n).map(|i| format!("x{i}")).collect())
            .unwrap();
    let crn =
        CrnForm { symbols, stoich: stoich.to_vec(), rate_monomials: (0..s).map(|j| (j, Mon(vec![0; n]))).collect() };
    let basis = linear_basis(&crn);
    for law in &basis {
        prop_assert!(law.times(stoich).iter().all(|c| *c == 0.into()));
    }
    let qs: Vec<Vec<Q>> = stoich.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    prop_assert_eq!(basis.len(), n - rank(&qs));
    prop_assert_eq!(stoich_rank(&crn), rank(&qs));
    Ok(())
}

pub fn potential_strategy() -> impl Strategy<Value = Poly<Q>> {
    (1usize..=4).prop_flat_map(|n| poly_strategy(n, 4, 6))
}

/// `curl(grad φ) = 0` and `integrate(grad φ) = φ − φ(0)`.
pub fn check_gradient(phi: &Poly<Q>) -> Result<(), TestCaseError> {
    let n = phi.nvars();
    let g = gradient(phi, 0, n);
    prop_assert!(curl(&g, 0).is_zero());
    let back = integrate(&g, 0).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let centered = phi - &Poly::constant(n, phi.constant_term());
    prop_assert_eq!(back, centered);
    Ok(())
}

/// Random matrix of size at most 3x3 with entries of degree at most 2 in
/// `nsym ≤ 3` symbols, plus a seed for the test points.
pub fn matrix_strategy() -> impl Strategy<Value = (usize, Vec<Vec<Poly<Q>>>, u64)> {
    (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(nsym, rows, cols)| {
        (Just(nsym), prop::collection::vec(prop::collection::vec(poly_strategy(nsym, 2, 2), cols), rows), any::<u64>())
    })
}

/// Exactly one case holds at each random point and its rank is the numeric
/// rank there. Coordinates in `[-2, 2]` make degenerate points frequent.
pub fn check_rank_decomposition(nsym: usize, a: &[Vec<Poly<Q>>], seed: u64) -> Result<(), TestCaseError> {
    let dec = parametric_rank(a, &SignContext::free(nsym));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANK_POINTS {
        let point: Vec<Q> = (0..nsym).map(|_| q(rng.gen_range(-2..=2))).collect();
        prop_assert!(dec.validate_at(a, &point), "point {:?}", point);
    }
    Ok(())
}

/// Undetermined coefficients: basis of `{s : Σ s_i f_i = 0, deg s_i ≤ d}`.
pub fn brute_force_syzygies(f: &[Poly<Q>], d: i64) -> Vec<ModVec<Q>> {
    let nvars = f[0].nvars();
    let mut unknowns: Vec<(usize, Mon)> = Vec::new();
    for i in 0..f.len() {
        for u in Mon::all_up_to_degree(nvars, d) {
            unknowns.push((i, u));
        }
    }
    let mut rows_of: std::collections::BTreeMap<Mon, Vec<Q>> = Default::default();
    for (col, (i, u)) in unknowns.iter().enumerate() {
        for (m, c) in f[*i].terms() {
            let row = rows_of.entry(m.mul(u)).or_insert_with(|| vec![q(0); unknowns.len()]);
            row[col] += c;
        }
    }
    let rows: Vec<Vec<Q>> = rows_of.into_values().collect();
    right_kernel(&rows, unknowns.len())
        .into_iter()
        .map(|v| {
            let mut s = ModVec::zero(f.len(), nvars);
            for ((i, u), c) in unknowns.iter().zip(v) {
                s.0[*i].add_term(u.clone(), c);
            }
            s
        })
        .collect()
}

/// Up to three nonzero polynomials of degree at most 2 in two variables,
/// with a degree bound for the comparison.
pub fn syzygy_input_strategy() -> impl Strategy<Value = (Vec<Poly<Q>>, i64)> {
    (prop::collection::vec(poly_strategy(2, 2, 3).prop_filter("nonzero", |p| !p.is_zero()), 1..=3), 2i64..=4)
}

/// Every brute-force syzygy lies in the computed module, and the truncated
/// span of the module basis has the brute-force dimension.
pub fn check_syzygy_completeness(f: &[Poly<Q>], d: i64) -> Result<(), TestCaseError> {
    let order = TermOrder::DegRevLex;
    let s = syzygy_basis(f, 2, &order);
    prop_assert!(s.verify());
    let mo = ModuleOrder::top(order);
    let brute = brute_force_syzygies(f, d);
    for v in &brute {
        prop_assert!(module_normal_form(v, &s.generators, &mo).is_zero());
    }
    // the module basis is degree compatible, so products u·g with
    // deg(u·g) ≤ d span all syzygies with components of degree ≤ d
    let span = if s.generators.is_empty() {
        0
    } else {
        truncated_span(&s.generators, d, DegreeConvention::Product, &order).unwrap().elements.len()
    };
    prop_assert_eq!(span, brute.len());
    Ok(())
}
