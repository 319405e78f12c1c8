//! SMT-LIB 2 export of undecided formulas: the negated claim is asserted
//! under `QF_NRA`, so `unsat` certifies the claim.

use num_traits::{One, Signed};

use crate::algebra::{Poly, Q};

use super::decide::Formula;
use super::{Constraint, Sign};

fn rational(c: &Q) -> String {
    let a = c.abs();
    let body = if a.is_integer() { format!("{}.0", a.numer()) } else { format!("(/ {}.0 {}.0)", a.numer(), a.denom()) };
    if c.is_negative() {
        format!("(- {})", body)
    } else {
        body
    }
}

/// Polynomial as an s-expression over `names`.
pub fn poly_sexpr(p: &Poly<Q>, names: &[String]) -> String {
    if p.is_zero() {
        return "0.0".to_string();
    }
    let terms: Vec<String> = p
        .sorted_terms(&super::ATOM_ORDER)
        .into_iter()
        .rev()
        .map(|(m, c)| {
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || m.is_one() {
                factors.push(rational(c));
            }
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    factors.push(names[i].clone());
                }
            }
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("(* {})", factors.join(" "))
            }
        })
        .collect();
    if terms.len() == 1 {
        terms.into_iter().next().unwrap()
    } else {
        format!("(+ {})", terms.join(" "))
    }
}

fn constraint_sexpr(c: &Constraint, names: &[String]) -> String {
    let mut atoms: Vec<String> = c.equations.iter().map(|p| format!("(= {} 0.0)", poly_sexpr(p, names))).collect();
    atoms.extend(c.inequations.iter().map(|p| format!("(not (= {} 0.0))", poly_sexpr(p, names))));
    match atoms.len() {
        0 => "true".to_string(),
        1 => atoms.pop().unwrap(),
        _ => format!("(and {})", atoms.join(" ")),
    }
}

/// Script asserting the sign assumptions, the premise and the negated
/// conclusion.
pub fn to_smtlib(f: &Formula) -> String {
    let names = f.symbols.names();
    let mut s = String::new();
    s.push_str("; unsat certifies the implication\n");
    s.push_str("(set-logic QF_NRA)\n");
    for n in &names {
        s.push_str(&format!("(declare-const {} Real)\n", n));
    }
    for (i, sign) in f.ctx.0.iter().enumerate() {
        match sign {
            Sign::Positive => s.push_str(&format!("(assert (> {} 0.0))\n", names[i])),
            Sign::NonNegative => s.push_str(&format!("(assert (>= {} 0.0))\n", names[i])),
            Sign::Free => {}
        }
    }
    for p in &f.premise {
        s.push_str(&format!("(assert (= {} 0.0))\n", poly_sexpr(p, &names)));
    }
    let concl = match f.conclusion.len() {
        0 => "false".to_string(),
        1 => constraint_sexpr(&f.conclusion[0], &names),
        _ => format!("(or {})", f.conclusion.iter().map(|c| constraint_sexpr(c, &names)).collect::<Vec<_>>().join(" ")),
    };
    s.push_str(&format!("(assert (not {}))\n", concl));
    s.push_str("(check-sat)\n(exit)\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;
    use crate::model_io::parse_poly;

    #[test]
    fn sexpr_rendering() {
        let t = SymbolTable::from_strs(&["k1"], &["x1"]);
        let p = parse_poly("-k1*x1^2 + 1/2", &t).unwrap();
        assert_eq!(poly_sexpr(&p, &t.names()), "(+ (/ 1.0 2.0) (* (- 1.0) k1 x1 x1))");
    }
}
