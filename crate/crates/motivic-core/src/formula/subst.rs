//! Capture-free substitution of terms for free variables.
//!
//! Free and bound variables live in separate namespaces (positional vs
//! de Bruijn), so substituting closed-in-binders terms can never capture.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;

use super::{fold_term, term_sort, Atom, Formula, Sort, SortError, Term};

/// Assignment of replacement terms to free variables.
pub type SubstMap = BTreeMap<(Sort, usize), Term>;

fn contains_bound(t: &Term) -> bool {
    match t {
        Term::BoundVar(_) => true,
        Term::FreeVar(..) | Term::ValConst(_) | Term::ResConst(_) | Term::OrdConst(_) => false,
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            contains_bound(a) || contains_bound(b)
        }
        Term::Neg(a) | Term::Ord(a) | Term::Ac(a) => contains_bound(a),
    }
}

fn validate(map: &SubstMap) -> Result<(), SortError> {
    for ((sort, idx), repl) in map {
        if contains_bound(repl) {
            return Err(SortError {
                msg: "replacement term contains bound variables".to_string(),
                subterm: super::print_term(repl),
            });
        }
        let rs = term_sort(repl, &[])?;
        if rs != *sort {
            return Err(SortError {
                msg: format!(
                    "substituting a {rs:?} term for {}{} of sort {sort:?}",
                    sort.var_prefix(),
                    idx + 1
                ),
                subterm: super::print_term(repl),
            });
        }
    }
    Ok(())
}

fn subst_term(t: &Term, map: &SubstMap) -> Term {
    let out = match t {
        Term::FreeVar(s, k) => {
            return map.get(&(*s, *k)).cloned().unwrap_or_else(|| t.clone());
        }
        Term::BoundVar(_) | Term::ValConst(_) | Term::ResConst(_) | Term::OrdConst(_) => {
            return t.clone();
        }
        Term::Add(a, b) => Term::add(subst_term(a, map), subst_term(b, map)),
        Term::Sub(a, b) => Term::sub(subst_term(a, map), subst_term(b, map)),
        Term::Mul(a, b) => Term::mul(subst_term(a, map), subst_term(b, map)),
        Term::Neg(a) => Term::neg(subst_term(a, map)),
        Term::Ord(a) => Term::ord_of(subst_term(a, map)),
        Term::Ac(a) => Term::ac_of(subst_term(a, map)),
    };
    fold_term(out)
}

fn subst_formula(f: &Formula, map: &SubstMap) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(Atom::Eq(a, b)) => {
            Formula::eq(subst_term(a, map), subst_term(b, map))
        }
        Formula::Atom(Atom::Le(a, b)) => {
            Formula::le(subst_term(a, map), subst_term(b, map))
        }
        Formula::Atom(Atom::Cong { modulus, lhs, rhs }) => Formula::cong(
            *modulus,
            subst_term(lhs, map),
            subst_term(rhs, map),
        ),
        Formula::Not(g) => Formula::not(subst_formula(g, map)),
        Formula::And(a, b) => Formula::and(subst_formula(a, map), subst_formula(b, map)),
        Formula::Or(a, b) => Formula::or(subst_formula(a, map), subst_formula(b, map)),
        Formula::Exists(b, g) => {
            Formula::Exists(b.clone(), Box::new(subst_formula(g, map)))
        }
        Formula::Forall(b, g) => {
            Formula::Forall(b.clone(), Box::new(subst_formula(g, map)))
        }
    }
}

/// Substitute terms for free variables in a term.
pub fn substitute_term(t: &Term, map: &SubstMap) -> Result<Term, SortError> {
    validate(map)?;
    Ok(subst_term(t, map))
}

/// Substitute terms for free variables throughout a formula. Constant
/// subterms created by the substitution are folded.
pub fn substitute(f: &Formula, map: &SubstMap) -> Result<Formula, SortError> {
    validate(map)?;
    Ok(subst_formula(f, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_term, print_formula};

    #[test]
    fn substitutes_and_folds() {
        let f = parse_formula("ord(x1) = i1").unwrap();
        let mut map = SubstMap::new();
        map.insert(
            (Sort::Val, 0),
            parse_term("0", Some(Sort::Val)).unwrap(),
        );
        let g = substitute(&f, &map).unwrap();
        assert_eq!(print_formula(&g), "ord(0) = i1");

        let f = parse_formula("i1 >= 0").unwrap();
        let mut map = SubstMap::new();
        map.insert((Sort::Ord, 0), parse_term("i2 + 1", Some(Sort::Ord)).unwrap());
        let g = substitute(&f, &map).unwrap();
        assert_eq!(print_formula(&g), "0 <= i2 + 1");
    }

    #[test]
    fn rejects_sort_mismatch() {
        let f = parse_formula("ord(x1) = i1").unwrap();
        let mut map = SubstMap::new();
        map.insert((Sort::Val, 0), parse_term("u1", Some(Sort::Res)).unwrap());
        assert!(substitute(&f, &map).is_err());
    }

    #[test]
    fn composition_on_disjoint_domains() {
        let f = parse_formula("i1 + i2 <= i3").unwrap();
        let mut sigma = SubstMap::new();
        sigma.insert((Sort::Ord, 0), parse_term("i2 + 1", Some(Sort::Ord)).unwrap());
        let mut tau = SubstMap::new();
        tau.insert((Sort::Ord, 2), parse_term("5", Some(Sort::Ord)).unwrap());

        let one_then_other = substitute(&substitute(&f, &sigma).unwrap(), &tau).unwrap();
        let mut combined = sigma.clone();
        combined.extend(tau.clone());
        let at_once = substitute(&f, &combined).unwrap();
        assert_eq!(one_then_other, at_once);
    }
}
