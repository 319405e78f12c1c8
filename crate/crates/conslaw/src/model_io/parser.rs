//! Line-oriented model format and polynomial expression parser.
//!
//! ```text
//! # Michaelis–Menten
//! params: k1 k2 k3
//! vars: x1 x2 x3
//! ode x1 = -k1*x1*x3 + k2*x2
//! order k3 = 1
//! ```

use std::collections::BTreeMap;

use crate::algebra::rational::parse_rational;
use crate::algebra::{Field, Poly, SymbolTable, Q};

use super::{ModelError, OdeModel};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

/// Splits an expression into tokens with their 1-based columns.
fn tokenize(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ModelError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let text = if text.starts_with('.') { format!("0{}", text) } else { text };
            let v = parse_rational(&text).ok_or_else(|| syntax(line, col, format!("bad number `{}`", text)))?;
            out.push((Tok::Num(v), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(syntax(line, col, format!("unexpected character `{}`", c)));
        }
    }
    Ok(out)
}

fn syntax(line: usize, col: usize, msg: String) -> ModelError {
    ModelError::Syntax { line, col, msg }
}

/// Recursive-descent parser over one expression.
struct ExprParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    symbols: &'a SymbolTable,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn expr(&mut self) -> Result<Poly<Q>, ModelError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<Q>, ModelError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            let col = self.col();
            self.pos += 1;
            let t = self.unary()?;
            if c == '*' {
                acc = &acc * &t;
            } else {
                if !t.is_constant() || t.is_zero() {
                    return Err(syntax(self.line, col, "division only by nonzero numeric constants".into()));
                }
                acc = acc.scale(&t.constant_term().inv());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly<Q>, ModelError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<Q>, ModelError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(e)) if e.is_integer() && !num_traits::Signed::is_negative(&e) => {
                    self.pos += 1;
                    let e: u32 =
                        e.to_integer().try_into().map_err(|_| syntax(self.line, col, "exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(syntax(self.line, col, "expected a non-negative integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<Q>, ModelError> {
        let col = self.col();
        let nsym = self.symbols.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Poly::constant(nsym, v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.symbols.index(&name) {
                    Some(i) => Ok(Poly::var(nsym, i)),
                    None => Err(ModelError::UndeclaredSymbol { line: self.line, col, name }),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(syntax(self.line, self.col(), "expected `)`".into())),
                }
            }
            Some(t) => Err(syntax(self.line, col, format!("unexpected token {:?}", t))),
            None => Err(syntax(self.line, col, "unexpected end of expression".into())),
        }
    }
}

/// Parses a polynomial expression over `symbols`. `line`/`col0` locate the
/// text for error messages.
pub fn parse_poly_at(text: &str, symbols: &SymbolTable, line: usize, col0: usize) -> Result<Poly<Q>, ModelError> {
    let toks = tokenize(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    let mut p = ExprParser { toks, pos: 0, line, end_col, symbols };
    if p.peek().is_none() {
        return Err(syntax(line, end_col, "empty expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(line, p.col(), "trailing input".into()));
    }
    Ok(e)
}

/// Parses a polynomial expression over `symbols`.
pub fn parse_poly(text: &str, symbols: &SymbolTable) -> Result<Poly<Q>, ModelError> {
    parse_poly_at(text, symbols, 1, 1)
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a model file.
pub fn parse_model(text: &str) -> Result<OdeModel, ModelError> {
    parse_model_named(text, "model")
}

/// Parses a model file and records `name` in the result.
pub fn parse_model_named(text: &str, name: &str) -> Result<OdeModel, ModelError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    // first pass: declarations
    let mut params: Vec<String> = Vec::new();
    let mut vars: Vec<String> = Vec::new();
    for &(ln, l) in &lines {
        let t = l.trim_start();
        let (kind, rest) = if let Some(r) = t.strip_prefix("params:") {
            ("params", r)
        } else if let Some(r) = t.strip_prefix("vars:") {
            ("vars", r)
        } else {
            continue;
        };
        let offset = l.len() - rest.len();
        for (name, col) in words(rest, offset) {
            if !is_name(name) {
                return Err(syntax(ln, col, format!("invalid symbol name `{}`", name)));
            }
            if params.iter().chain(vars.iter()).any(|n| n == name) {
                return Err(ModelError::DuplicateVariable { line: ln, name: name.to_string() });
            }
            if kind == "params" {
                params.push(name.to_string());
            } else {
                vars.push(name.to_string());
            }
        }
    }
    if vars.is_empty() {
        return Err(ModelError::Syntax { line: 1, col: 1, msg: "no `vars:` declaration".into() });
    }
    let symbols = SymbolTable::new(params, vars).expect("checked distinct");
    let (r, n) = (symbols.r(), symbols.n());

    // second pass: equations and orders
    let mut rhs: BTreeMap<usize, Poly<Q>> = BTreeMap::new();
    let mut param_orders = vec![0u32; r];
    let mut var_orders = vec![0u32; n];
    for &(ln, l) in &lines {
        let t = l.trim_start();
        let indent = l.len() - t.len();
        if t.starts_with("params:") || t.starts_with("vars:") {
            continue;
        }
        let (kw, rest) = match t.split_once(char::is_whitespace) {
            Some((kw, rest)) if kw == "ode" || kw == "order" => (kw, rest),
            _ => return Err(syntax(ln, indent + 1, "expected `params:`, `vars:`, `ode` or `order`".into())),
        };
        let Some((lhs, rhs_text)) = rest.split_once('=') else {
            return Err(syntax(ln, l.len() + 1, "expected `=`".into()));
        };
        let lhs_name = lhs.trim();
        let lhs_col = indent + kw.len() + 1 + (lhs.len() - lhs.trim_start().len()) + 1;
        let rhs_col = l.len() - rhs_text.len() + 1;
        if kw == "ode" {
            let Some(idx) = symbols.vars().iter().position(|v| v == lhs_name) else {
                return Err(if symbols.index(lhs_name).is_some() {
                    syntax(ln, lhs_col, format!("`{}` is a parameter, not a variable", lhs_name))
                } else {
                    ModelError::UndeclaredSymbol { line: ln, col: lhs_col, name: lhs_name.to_string() }
                });
            };
            if rhs.contains_key(&idx) {
                return Err(ModelError::DuplicateEquation { line: ln, var: lhs_name.to_string() });
            }
            rhs.insert(idx, parse_poly_at(rhs_text, &symbols, ln, rhs_col)?);
        } else {
            let Some(idx) = symbols.index(lhs_name) else {
                return Err(ModelError::UndeclaredSymbol { line: ln, col: lhs_col, name: lhs_name.to_string() });
            };
            let v = rhs_text.trim();
            let e: u32 = v
                .parse()
                .map_err(|_| syntax(ln, rhs_col, format!("order must be a non-negative integer, got `{}`", v)))?;
            if idx < r {
                param_orders[idx] = e;
            } else {
                var_orders[idx - r] = e;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for (i, v) in symbols.vars().iter().enumerate() {
        match rhs.remove(&i) {
            Some(p) => out.push(p),
            None => return Err(ModelError::MissingOde { var: v.clone() }),
        }
    }
    Ok(OdeModel { name: name.to_string(), symbols, rhs: out, param_orders, var_orders })
}

/// Whitespace/comma separated words with their 1-based columns.
fn words(s: &str, offset: usize) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() || c == ',' {
            if let Some(st) = start.take() {
                out.push((&s[st..i], offset + st + 1));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((&s[st..], offset + st + 1));
    }
    out
}
