//! Canonical deterministic printing. `parse(print(f)) == f` for every
//! well-formed formula whose bound occurrences are not captured by a
//! shadowing binder of the same name (the parser never produces such a
//! tree, since name lookup always resolves to the innermost binder).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::poly::Laurent;
use crate::Rat;

use super::{Atom, Formula, Term};

// Term precedence levels: 1 sums, 2 products, 3 unary minus, 4 primaries.
const LV_SUM: u8 = 1;
const LV_PROD: u8 = 2;
const LV_UNARY: u8 = 3;

fn rat_str(q: &Rat) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// One Laurent monomial `c * t^k` with positive `c`; coefficient part
/// parenthesized when fractional.
fn monomial_str(c: &Rat, k: i64) -> String {
    debug_assert!(c.is_positive());
    if k == 0 {
        return rat_str(c);
    }
    let tpart = if k == 1 {
        String::from("t")
    } else {
        format!("t^{k}")
    };
    if c.is_one() {
        tpart
    } else if c.is_integer() {
        format!("{}*{}", c.numer(), tpart)
    } else {
        format!("({})*{}", rat_str(c), tpart)
    }
}

/// `(text, precedence)` of a Val constant printed in ascending powers of t.
fn val_const_str(l: &Laurent<Rat>) -> (String, u8) {
    let monos: Vec<(i64, &Rat)> = l.monomials().collect();
    match monos.len() {
        0 => (String::from("0"), 4),
        1 => {
            let (k, c) = monos[0];
            if c.is_positive() {
                let s = monomial_str(c, k);
                let prec = if s.contains('*') { LV_PROD } else { 4 };
                (s, prec)
            } else {
                let s = format!("-{}", monomial_str(&-c.clone(), k));
                (s, LV_UNARY)
            }
        }
        _ => {
            let mut s = String::new();
            for (idx, (k, c)) in monos.iter().enumerate() {
                if idx == 0 {
                    if c.is_positive() {
                        s.push_str(&monomial_str(c, *k));
                    } else {
                        s.push('-');
                        s.push_str(&monomial_str(&-(*c).clone(), *k));
                    }
                } else if c.is_positive() {
                    s.push_str(" + ");
                    s.push_str(&monomial_str(c, *k));
                } else {
                    s.push_str(" - ");
                    s.push_str(&monomial_str(&-(*c).clone(), *k));
                }
            }
            (s, LV_SUM)
        }
    }
}

fn term_str(t: &Term, binders: &mut Vec<String>) -> (String, u8) {
    match t {
        Term::FreeVar(s, k) => (format!("{}{}", s.var_prefix(), k + 1), 4),
        Term::BoundVar(k) => {
            let name = binders
                .iter()
                .rev()
                .nth(*k)
                .cloned()
                .unwrap_or_else(|| format!("_b{k}"));
            (name, 4)
        }
        Term::ValConst(l) => val_const_str(l),
        Term::ResConst(q) => {
            if q.is_negative() {
                (format!("-{}", rat_str(&-q.clone())), LV_UNARY)
            } else {
                (rat_str(q), 4)
            }
        }
        Term::OrdConst(n) => {
            if n.is_negative() {
                (format!("{n}"), LV_UNARY)
            } else {
                (format!("{n}"), 4)
            }
        }
        Term::Add(a, b) => {
            let sa = at_level(a, LV_SUM, binders);
            let sb = at_level(b, LV_PROD, binders);
            (format!("{sa} + {sb}"), LV_SUM)
        }
        Term::Sub(a, b) => {
            let sa = at_level(a, LV_SUM, binders);
            let sb = at_level(b, LV_PROD, binders);
            (format!("{sa} - {sb}"), LV_SUM)
        }
        Term::Mul(a, b) => {
            let sa = at_level(a, LV_PROD, binders);
            let sb = at_level(b, LV_UNARY, binders);
            (format!("{sa} * {sb}"), LV_PROD)
        }
        Term::Neg(a) => {
            let sa = at_level(a, LV_UNARY, binders);
            (format!("-{sa}"), LV_UNARY)
        }
        Term::Ord(a) => {
            let (sa, _) = term_str(a, binders);
            (format!("ord({sa})"), 4)
        }
        Term::Ac(a) => {
            let (sa, _) = term_str(a, binders);
            (format!("ac({sa})"), 4)
        }
    }
}

fn at_level(t: &Term, level: u8, binders: &mut Vec<String>) -> String {
    let (s, prec) = term_str(t, binders);
    if prec < level {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_term(t: &Term) -> String {
    term_str(t, &mut Vec::new()).0
}

// Formula precedence: 1 disjunction, 2 conjunction, 3 units.
fn formula_str(f: &Formula, level: u8, binders: &mut Vec<String>) -> String {
    let (s, prec) = match f {
        Formula::True => (String::from("true"), 3),
        Formula::False => (String::from("false"), 3),
        Formula::Atom(a) => (atom_str(a, binders), 3),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(Atom::Eq(a, b)) => {
                let sa = at_level(a, LV_SUM, binders);
                let sb = at_level(b, LV_SUM, binders);
                (format!("{sa} != {sb}"), 3)
            }
            other => (format!("!({})", formula_str(other, 1, binders)), 3),
        },
        Formula::And(a, b) => {
            let sa = formula_str(a, 2, binders);
            let sb = formula_str(b, 3, binders);
            (format!("{sa} && {sb}"), 2)
        }
        Formula::Or(a, b) => {
            let sa = formula_str(a, 1, binders);
            let sb = formula_str(b, 2, binders);
            (format!("{sa} || {sb}"), 1)
        }
        Formula::Exists(b, g) | Formula::Forall(b, g) => {
            let kw = if matches!(f, Formula::Exists(..)) {
                "exists"
            } else {
                "forall"
            };
            binders.push(b.name.clone());
            let body = formula_str(g, 1, binders);
            binders.pop();
            (format!("{kw} {}:{} ({body})", b.name, b.sort.letter()), 3)
        }
    };
    if prec < level {
        format!("({s})")
    } else {
        s
    }
}

fn atom_str(a: &Atom, binders: &mut Vec<String>) -> String {
    match a {
        Atom::Eq(x, y) => {
            let sx = at_level(x, LV_SUM, binders);
            let sy = at_level(y, LV_SUM, binders);
            format!("{sx} = {sy}")
        }
        Atom::Le(x, y) => {
            let sx = at_level(x, LV_SUM, binders);
            let sy = at_level(y, LV_SUM, binders);
            format!("{sx} <= {sy}")
        }
        Atom::Cong { modulus, lhs, rhs } => {
            let sl = term_str(lhs, binders).0;
            let sr = at_level(rhs, LV_SUM, binders);
            format!("mod({sl}, {modulus}) = {sr}")
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    formula_str(f, 1, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn round_trip(src: &str) {
        let f = parse_formula(src).unwrap();
        let printed = print_formula(&f);
        let g = parse_formula(&printed)
            .unwrap_or_else(|e| panic!("reparse of `{printed}` failed: {e}"));
        assert_eq!(f, g, "round trip through `{printed}`");
    }

    #[test]
    fn round_trips() {
        round_trip("ord(x1) = i1 && ac(x1) = u1");
        round_trip("exists y:V (x1 = y*y)");
        round_trip("i1 + 1 <= i2 || mod(i1, 3) = 2");
        round_trip("!(i1 <= 0) && u1 != 0");
        round_trip("x1 = 3*t + t^2 - (1/2)*t^-1");
        round_trip("forall j:Z exists k:Z (j <= k && mod(k, 2) = 1)");
        round_trip("x1 * (3*t + 1) = 0 && -2 <= i1 - -3");
        round_trip("(i1 = 0 || i2 = 1) && i3 <= -4");
        round_trip("u1 * u1 - 1/2 = 0");
    }
}
