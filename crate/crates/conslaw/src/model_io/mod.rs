//! ODE models: parsing, conversion to reaction-network form, numeric
//! coefficient splitting, dominant-term truncation and positivity checks.

pub mod parser;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::algebra::{Mon, Poly, SymbolTable, TermOrder, Q};

pub use parser::{parse_model, parse_model_named, parse_poly};

/// Errors raised while reading or converting models.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: undeclared symbol `{name}`")]
    UndeclaredSymbol { line: usize, col: usize, name: String },
    #[error("line {line}: duplicate symbol `{name}`")]
    DuplicateVariable { line: usize, name: String },
    #[error("line {line}: duplicate equation for `{var}`")]
    DuplicateEquation { line: usize, var: String },
    #[error("no ODE given for variable `{var}`")]
    MissingOde { var: String },
    #[error("equation for `{var}`: term `{term}` is not an integer multiple of one rate symbol times a monomial")]
    NotMassAction { var: String, term: String },
    #[error("numeric splitting requires parameter-free right-hand sides")]
    SymbolicCoefficients,
}

/// Parametric polynomial ODE system `ẋ_i = f_i(k, x)`. Right-hand sides live
/// over the full symbol table (parameters first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeModel {
    pub name: String,
    pub symbols: SymbolTable,
    pub rhs: Vec<Poly<Q>>,
    pub param_orders: Vec<u32>,
    pub var_orders: Vec<u32>,
}

impl OdeModel {
    /// Builds a model from symbol names and right-hand sides without orders.
    pub fn new(name: &str, symbols: SymbolTable, rhs: Vec<Poly<Q>>) -> Self {
        let (r, n) = (symbols.r(), symbols.n());
        OdeModel { name: name.to_string(), symbols, rhs, param_orders: vec![0; r], var_orders: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.symbols.n()
    }

    pub fn r(&self) -> usize {
        self.symbols.r()
    }

    /// Total number of symbols `r + n`.
    pub fn nsym(&self) -> usize {
        self.symbols.len()
    }

    /// Default term order: parameters below variables.
    pub fn order(&self) -> TermOrder {
        TermOrder::params_below(self.r())
    }

    /// True when some right-hand side mentions a parameter.
    pub fn uses_params(&self) -> bool {
        self.rhs.iter().any(|p| (0..self.r()).any(|k| p.uses_var(k)))
    }

    /// True when some order annotation is nonzero.
    pub fn has_orders(&self) -> bool {
        self.param_orders.iter().chain(&self.var_orders).any(|&e| e != 0)
    }

    /// Serializes back to the model file format.
    pub fn to_text(&self) -> String {
        let names = self.symbols.names();
        let mut s = String::new();
        if self.r() > 0 {
            s.push_str(&format!("params: {}\n", self.symbols.params().join(" ")));
        }
        s.push_str(&format!("vars: {}\n", self.symbols.vars().join(" ")));
        for (v, f) in self.symbols.vars().iter().zip(&self.rhs) {
            s.push_str(&format!("ode {} = {}\n", v, f.to_text(&names)));
        }
        for (k, e) in self.symbols.params().iter().zip(&self.param_orders) {
            if *e != 0 {
                s.push_str(&format!("order {} = {}\n", k, e));
            }
        }
        for (x, e) in self.symbols.vars().iter().zip(&self.var_orders) {
            if *e != 0 {
                s.push_str(&format!("order {} = {}\n", x, e));
            }
        }
        s
    }

    /// δ-order of a monomial: `Σ e_j·a_j + Σ d_i·b_i`.
    pub fn delta_order(&self, m: &Mon) -> i64 {
        let r = self.r();
        let pk: i64 = self.param_orders.iter().zip(&m.0[..r]).map(|(&e, &a)| e as i64 * a as i64).sum();
        let px: i64 = self.var_orders.iter().zip(&m.0[r..]).map(|(&d, &b)| d as i64 * b as i64).sum();
        pk + px
    }
}

/// Reaction-network form `f_i = Σ_j S_ij k_j x^{α_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrnForm {
    pub symbols: SymbolTable,
    /// `n x r'` integer matrix, one column per distinct rate monomial.
    pub stoich: Vec<Vec<i64>>,
    /// Rate symbol (parameter index) and multi-index over the variables.
    pub rate_monomials: Vec<(usize, Mon)>,
}

impl CrnForm {
    pub fn n(&self) -> usize {
        self.symbols.n()
    }

    /// Number of rate monomials (columns of `S`).
    pub fn reactions(&self) -> usize {
        self.rate_monomials.len()
    }

    /// Expands `S · (k_j x^{α_j})` back into polynomials over the full symbol
    /// table.
    pub fn reconstruct(&self) -> Vec<Poly<Q>> {
        let (r, nsym) = (self.symbols.r(), self.symbols.len());
        (0..self.n())
            .map(|i| {
                let mut p = Poly::zero(nsym);
                for (j, (k, a)) in self.rate_monomials.iter().enumerate() {
                    let s = self.stoich[i][j];
                    if s != 0 {
                        let mut e = vec![0; nsym];
                        e[*k] = 1;
                        e[r..].copy_from_slice(&a.0);
                        p.add_term(Mon(e), Q::from_integer(BigInt::from(s)));
                    }
                }
                p
            })
            .collect()
    }

    /// Rate monomial `j` as text, e.g. `k1*x1*x3`.
    pub fn rate_text(&self, j: usize) -> String {
        let (k, a) = &self.rate_monomials[j];
        let xs = crate::algebra::poly::mono_text(a, self.symbols.vars());
        if xs.is_empty() {
            self.symbols.params()[*k].clone()
        } else {
            format!("{}*{}", self.symbols.params()[*k], xs)
        }
    }
}

/// Converts a model whose terms are integer multiples of one rate symbol
/// times a (possibly rational) monomial in the variables. Columns follow the
/// descending term order of `k_j x^{α_j}`.
pub fn to_crn(m: &OdeModel) -> Result<CrnForm, ModelError> {
    let (r, n) = (m.r(), m.n());
    let names = m.symbols.names();
    let order = m.order();
    let mut entries: Vec<(usize, (usize, Mon), i64)> = Vec::new();
    for (i, f) in m.rhs.iter().enumerate() {
        for (mon, c) in f.sorted_terms(&order) {
            let bad = || ModelError::NotMassAction {
                var: m.symbols.vars()[i].clone(),
                term: Poly::term(m.nsym(), mon.clone(), c.clone()).to_text(&names),
            };
            let kpart = &mon.0[..r];
            let Some(k) = kpart.iter().position(|&e| e != 0) else { return Err(bad()) };
            if kpart[k] != 1 || kpart.iter().filter(|&&e| e != 0).count() != 1 {
                return Err(bad());
            }
            if !c.is_integer() {
                return Err(bad());
            }
            let z = c.to_integer().to_i64().ok_or_else(bad)?;
            entries.push((i, (k, Mon(mon.0[r..].to_vec())), z));
        }
    }
    // columns in descending term order of the full monomials k_j x^{α_j}
    let full = |(k, a): &(usize, Mon)| {
        let mut e = vec![0; r];
        e[*k] = 1;
        e.extend_from_slice(&a.0);
        Mon(e)
    };
    let mut rates: Vec<(usize, Mon)> = entries.iter().map(|e| e.1.clone()).collect();
    rates.sort_by(|a, b| order.cmp(&full(b), &full(a)));
    rates.dedup();
    let index: BTreeMap<&(usize, Mon), usize> = rates.iter().enumerate().map(|(j, key)| (key, j)).collect();
    let mut stoich = vec![vec![0i64; rates.len()]; n];
    for (i, key, z) in &entries {
        stoich[*i][index[key]] += z;
    }
    Ok(CrnForm { symbols: m.symbols.clone(), stoich, rate_monomials: rates })
}

/// Model with fresh rate symbols produced by [`split_numeric`], together
/// with the numeric value of each new symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericSplit {
    pub model: OdeModel,
    pub values: Vec<Q>,
}

/// Introduces rate symbols `k1, k2, …` for a parameter-free model so every
/// term becomes `(integer)·(rate symbol)·(monomial)`. Coefficients of one
/// monomial that are integer multiples of each other share a symbol, and
/// equal values share a symbol across monomials.
pub fn split_numeric(m: &OdeModel) -> Result<NumericSplit, ModelError> {
    if m.uses_params() {
        return Err(ModelError::SymbolicCoefficients);
    }
    let (r, n) = (m.r(), m.n());
    let order = TermOrder::DegRevLex;
    let xpart = |mon: &Mon| Mon(mon.0[r..].to_vec());

    // per monomial: coefficients by equation, assigned (z, base value)
    let mut by_mon: BTreeMap<Mon, Vec<(usize, Q)>> = BTreeMap::new();
    for (i, f) in m.rhs.iter().enumerate() {
        for (mon, c) in f.terms() {
            by_mon.entry(xpart(mon)).or_default().push((i, c.clone()));
        }
    }
    let mut assign: BTreeMap<(usize, Mon), (BigInt, Q)> = BTreeMap::new();
    for (mon, cs) in &by_mon {
        let mut sorted = cs.clone();
        sorted.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.cmp(&b.0)));
        let mut bases: Vec<Q> = Vec::new();
        for (i, c) in sorted {
            let a = c.abs();
            let base = bases.iter().find(|b| (&a / *b).is_integer()).cloned();
            let base = match base {
                Some(b) => b,
                None => {
                    bases.push(a.clone());
                    a.clone()
                }
            };
            let z = (&c / &base).to_integer();
            assign.insert((i, mon.clone()), (z, base));
        }
    }

    // name rate symbols by first appearance
    let mut values: Vec<Q> = Vec::new();
    for (i, f) in m.rhs.iter().enumerate() {
        for (mon, _) in f.sorted_terms(&order) {
            let (_, b) = &assign[&(i, xpart(mon))];
            if !values.contains(b) {
                values.push(b.clone());
            }
        }
    }
    let nr = values.len();
    let mut used: Vec<String> = m.symbols.vars().to_vec();
    let mut params = Vec::with_capacity(nr);
    let mut next = 1;
    for _ in 0..nr {
        let mut name = format!("k{}", next);
        while used.contains(&name) {
            next += 1;
            name = format!("k{}", next);
        }
        used.push(name.clone());
        params.push(name);
        next += 1;
    }
    let symbols = SymbolTable::new(params, m.symbols.vars().to_vec()).expect("fresh names");
    let nsym = nr + n;
    let mut rhs = vec![Poly::zero(nsym); n];
    for ((i, mon), (z, b)) in &assign {
        let k = values.iter().position(|v| v == b).unwrap();
        let mut e = vec![0; nsym];
        e[k] = 1;
        e[nr..].copy_from_slice(&mon.0);
        rhs[*i].add_term(Mon(e), Q::from_integer(z.clone()));
    }
    let mut model = OdeModel::new(&m.name, symbols, rhs);
    model.var_orders = m.var_orders.clone();
    Ok(NumericSplit { model, values })
}

/// Model together with its dominant-term truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedModel {
    pub base: OdeModel,
    pub rhs1: Vec<Poly<Q>>,
    /// Minimal δ-order `b_i` per equation (`None` for `f_i = 0`).
    pub dominant_orders: Vec<Option<i64>>,
}

impl TruncatedModel {
    /// The truncated system as a model of its own.
    pub fn as_model(&self) -> OdeModel {
        let mut m = self.base.clone();
        m.rhs = self.rhs1.clone();
        m
    }
}

/// Keeps in each `f_i` exactly the terms of minimal δ-order.
pub fn truncate(m: &OdeModel) -> TruncatedModel {
    let mut rhs1 = Vec::with_capacity(m.n());
    let mut dominant = Vec::with_capacity(m.n());
    for f in &m.rhs {
        let b = f.terms().map(|(mon, _)| m.delta_order(mon)).min();
        dominant.push(b);
        rhs1.push(match b {
            None => f.clone(),
            Some(b) => Poly::from_terms(
                f.nvars(),
                f.terms().filter(|(mon, _)| m.delta_order(mon) == b).map(|(mon, c)| (mon.clone(), c.clone())),
            ),
        });
    }
    TruncatedModel { base: m.clone(), rhs1, dominant_orders: dominant }
}

/// Positions `(i, j)` (0-based) with `S_ij < 0` and `α_ji ≤ 0`; empty when the
/// sufficient condition for preserving the positive orthant holds.
pub fn positivity_check(c: &CrnForm) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..c.n() {
        for (j, (_, a)) in c.rate_monomials.iter().enumerate() {
            if c.stoich[i][j] < 0 && a.0[i] <= 0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Reaction-network form of any supported model: direct conversion when the
/// terms are already rate-symbol multiples, numeric splitting first for
/// parameter-free models. Returns the (possibly new) model alongside.
pub fn crn_of(m: &OdeModel) -> Result<(OdeModel, CrnForm, Option<Vec<Q>>), ModelError> {
    match to_crn(m) {
        Ok(c) => Ok((m.clone(), c, None)),
        Err(e) => {
            if m.uses_params() && !m.rhs.iter().all(|f| f.is_zero()) {
                return Err(e);
            }
            let s = split_numeric(m)?;
            let c = to_crn(&s.model)?;
            Ok((s.model, c, Some(s.values)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    const MM: &str = "params: k1 k2 k3\nvars: x1 x2 x3\n\
        ode x1 = -k1*x1*x3 + k2*x2\n\
        ode x2 = k1*x1*x3 - k2*x2 - k3*x2\n\
        ode x3 = -k1*x1*x3 + k2*x2 + k3*x2\n\
        order k3 = 1\n";

    #[test]
    fn mm_crn_and_truncation() {
        let m = parse_model(MM).unwrap();
        assert_eq!((m.n(), m.r()), (3, 3));
        let c = to_crn(&m).unwrap();
        assert_eq!(c.stoich, vec![vec![-1, 1, 0], vec![1, -1, -1], vec![-1, 1, 1]]);
        let texts: Vec<String> = (0..3).map(|j| c.rate_text(j)).collect();
        assert_eq!(texts, vec!["k1*x1*x3", "k2*x2", "k3*x2"]);
        assert_eq!(c.reconstruct(), m.rhs);
        assert!(positivity_check(&c).is_empty());
        let t = truncate(&m);
        let names = m.symbols.names();
        assert_eq!(t.rhs1[1].to_text(&names), "k1*x1*x3 - k2*x2");
        assert_eq!(t.rhs1[2].to_text(&names), "-k1*x1*x3 + k2*x2");
    }

    #[test]
    fn small_crn_examples() {
        let m = parse_model("params: k1\nvars: x1\node x1 = k1").unwrap();
        let c = to_crn(&m).unwrap();
        assert_eq!(c.stoich, vec![vec![1]]);
        assert_eq!(c.rate_monomials[0].1, Mon(vec![0]));
        let m = parse_model("params: k1 k2\nvars: x1 x2\node x1 = k1*x1*x2\node x2 = k2*x2 + 2*k1*x1*x2").unwrap();
        assert_eq!(to_crn(&m).unwrap().stoich, vec![vec![1, 0], vec![2, 1]]);
        let m = parse_model("params: k1\nvars: x1\node x1 = -k1").unwrap();
        assert_eq!(positivity_check(&to_crn(&m).unwrap()), vec![(0, 0)]);
        let m = parse_model("vars: x1\node x1 = -x1").unwrap();
        let s = split_numeric(&m).unwrap();
        assert_eq!(s.values, vec![q(1)]);
        assert_eq!(to_crn(&s.model).unwrap().stoich, vec![vec![-1]]);
        let m = parse_model("params: k1\nvars: x1\node x1 = k1^2*x1").unwrap();
        assert!(matches!(to_crn(&m), Err(ModelError::NotMassAction { .. })));
    }

    #[test]
    fn numeric_split_matches_hand_conversion() {
        let m = parse_model("vars: x1 x2\node x1 = 1.5*x1*x2\node x2 = x2 + 3*x1*x2").unwrap();
        let s = split_numeric(&m).unwrap();
        assert_eq!(s.values, vec![qf(3, 2), q(1)]);
        let names = s.model.symbols.names();
        assert_eq!(s.model.rhs[0].to_text(&names), "k1*x1*x2");
        assert_eq!(s.model.rhs[1].to_text(&names), "2*k1*x1*x2 + k2*x2");
        assert_eq!(to_crn(&s.model).unwrap().stoich, vec![vec![1, 0], vec![2, 1]]);

        let m = parse_model("vars: x1 x2\node x1 = x2 - x1\node x2 = x1 - x2").unwrap();
        let s = split_numeric(&m).unwrap();
        assert_eq!(s.values, vec![q(1)]);
        let c = to_crn(&s.model).unwrap();
        assert!(c.stoich.iter().flatten().all(|z| z.abs() == 1));
    }
}
