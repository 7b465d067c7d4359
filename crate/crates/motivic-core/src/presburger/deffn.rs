//! Explicit piecewise form of Presburger-definable total functions
//! `Z^r -> Z`, extracted from their graphs.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::formula::{Binder, Formula, Sort, SubstMap, Term};
use crate::Int;

use super::{to_linear_pieces, LinearPiece, PresburgerError};

/// Value map on one piece, in the piece's own coordinates: the value at
/// `apex + sum c_j g_j` is `base + sum c_j steps_j`. All data is integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineValue {
    pub base: Int,
    pub steps: Vec<Int>,
}

/// A total function `Z^r -> Z` as a disjoint piece list with affine values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearFn {
    pub arity: usize,
    pub pieces: Vec<(LinearPiece, AffineValue)>,
}

impl PiecewiseLinearFn {
    pub fn eval(&self, x: &[Int]) -> Option<Int> {
        for (piece, value) in &self.pieces {
            if let Some(coords) = piece.coordinates(x) {
                let mut v = value.base.clone();
                for (c, s) in coords.iter().zip(&value.steps) {
                    v += c * s;
                }
                return Some(v);
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefFnError {
    /// The graph misses a value somewhere; carries a witness argument.
    NotTotal { witness: Vec<Int> },
    /// Two values at one argument; carries the argument and both values.
    NotFunctional { arg: Vec<Int>, lo: Int, hi: Int },
    Presburger(PresburgerError),
}

impl From<PresburgerError> for DefFnError {
    fn from(e: PresburgerError) -> Self {
        DefFnError::Presburger(e)
    }
}

impl core::fmt::Display for DefFnError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DefFnError::NotTotal { witness } => {
                write!(f, "graph defines no value at {witness:?}")
            }
            DefFnError::NotFunctional { arg, lo, hi } => {
                write!(f, "graph has two values at {arg:?}: {lo} and {hi}")
            }
            DefFnError::Presburger(e) => write!(f, "{e}"),
        }
    }
}

/// Close over one free Ord variable with an existential quantifier.
fn bind_ord_var(f: &Formula, idx: usize) -> Formula {
    fn term(t: &Term, idx: usize, depth: usize) -> Term {
        match t {
            Term::FreeVar(Sort::Ord, k) if *k == idx => Term::BoundVar(depth),
            Term::Add(a, b) => Term::add(term(a, idx, depth), term(b, idx, depth)),
            Term::Sub(a, b) => Term::sub(term(a, idx, depth), term(b, idx, depth)),
            Term::Mul(a, b) => Term::mul(term(a, idx, depth), term(b, idx, depth)),
            Term::Neg(a) => Term::neg(term(a, idx, depth)),
            Term::Ord(a) => Term::ord_of(term(a, idx, depth)),
            Term::Ac(a) => Term::ac_of(term(a, idx, depth)),
            other => other.clone(),
        }
    }
    fn go(f: &Formula, idx: usize, depth: usize) -> Formula {
        use crate::formula::Atom;
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom(Atom::Eq(a, b)) => {
                Formula::eq(term(a, idx, depth), term(b, idx, depth))
            }
            Formula::Atom(Atom::Le(a, b)) => {
                Formula::le(term(a, idx, depth), term(b, idx, depth))
            }
            Formula::Atom(Atom::Cong { modulus, lhs, rhs }) => {
                Formula::cong(*modulus, term(lhs, idx, depth), term(rhs, idx, depth))
            }
            Formula::Not(g) => Formula::not(go(g, idx, depth)),
            Formula::And(a, b) => Formula::and(go(a, idx, depth), go(b, idx, depth)),
            Formula::Or(a, b) => Formula::or(go(a, idx, depth), go(b, idx, depth)),
            Formula::Exists(b, g) => {
                Formula::Exists(b.clone(), Box::new(go(g, idx, depth + 1)))
            }
            Formula::Forall(b, g) => {
                Formula::Forall(b.clone(), Box::new(go(g, idx, depth + 1)))
            }
        }
    }
    Formula::exists(Binder::new("w", Sort::Ord), go(f, idx, 0))
}

/// Turn the graph formula of a total function (value in the last of `r+1`
/// Ord variables) into an explicit piecewise-affine form.
///
/// Totality and functionality are decided exactly by quantifier
/// elimination; violations are rejected with a concrete witness.
pub fn normalize_definable_fn(
    graph: &Formula,
    arity: usize,
) -> Result<PiecewiseLinearFn, DefFnError> {
    // Functionality: no argument admits two distinct values.
    let shifted = {
        let mut map = SubstMap::new();
        map.insert((Sort::Ord, arity), Term::FreeVar(Sort::Ord, arity + 1));
        crate::formula::substitute(graph, &map).expect("rename value variable")
    };
    let two_values = Formula::and(
        graph.clone(),
        Formula::and(
            shifted,
            Formula::le(
                Term::add(Term::FreeVar(Sort::Ord, arity), Term::ord_const(1)),
                Term::FreeVar(Sort::Ord, arity + 1),
            ),
        ),
    );
    let bad = to_linear_pieces(&two_values, arity + 2)?;
    if let Some(piece) = bad.first() {
        let apex = &piece.apex;
        return Err(DefFnError::NotFunctional {
            arg: apex[..arity].to_vec(),
            lo: apex[arity].clone(),
            hi: apex[arity + 1].clone(),
        });
    }

    // Totality: the projection of the graph covers Z^r.
    let projected = bind_ord_var(graph, arity);
    let undefined = Formula::not(projected);
    let missing = to_linear_pieces(&undefined, arity)?;
    if let Some(piece) = missing.first() {
        return Err(DefFnError::NotTotal { witness: piece.apex.clone() });
    }

    // Graph pieces project bijectively: for a functional graph the
    // argument parts of the generators stay linearly independent.
    let graph_pieces = to_linear_pieces(graph, arity + 1)?;
    let mut pieces = Vec::new();
    for gp in graph_pieces {
        let apex_args = gp.apex[..arity].to_vec();
        let value = AffineValue {
            base: gp.apex[arity].clone(),
            steps: gp.generators.iter().map(|g| g[arity].clone()).collect(),
        };
        let gens: Vec<Vec<Int>> = gp
            .generators
            .iter()
            .map(|g| g[..arity].to_vec())
            .filter(|g| g.iter().any(|v| !v.is_zero()))
            .collect();
        debug_assert_eq!(
            gens.len(),
            gp.generators.len(),
            "functional graph piece has no vertical generator"
        );
        pieces.push((LinearPiece::plain(apex_args, gens), value));
    }
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(PiecewiseLinearFn { arity, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::int;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn successor_function() {
        // j = i1 + 1 with the value variable written as i2.
        let f = parse_formula("i2 = i1 + 1").unwrap();
        let pl = normalize_definable_fn(&f, 1).unwrap();
        for x in -20..20i64 {
            assert_eq!(pl.eval(&iv(&[x])), Some(int(x + 1)));
        }
    }

    #[test]
    fn min_with_zero() {
        // j = min(i1, 0): (i1 >= 0 && j = 0) || (i1 < 0 && j = i1)
        let f = parse_formula("(i1 >= 0 && i2 = 0) || (i1 < 0 && i2 = i1)").unwrap();
        let pl = normalize_definable_fn(&f, 1).unwrap();
        for x in -30..=30i64 {
            assert_eq!(pl.eval(&iv(&[x])), Some(int(x.min(0))), "at {x}");
        }
    }

    #[test]
    fn floor_halving() {
        // j = floor(i1 / 2): 2j <= i1 <= 2j + 1.
        let f = parse_formula("2*i2 <= i1 && i1 <= 2*i2 + 1").unwrap();
        let pl = normalize_definable_fn(&f, 1).unwrap();
        for x in -21..=21i64 {
            assert_eq!(pl.eval(&iv(&[x])), Some(int(x.div_euclid(2))), "at {x}");
        }
    }

    #[test]
    fn rejects_non_functional() {
        // j^2 = i1 is not even linear; use j = i1 or j = -i1 instead,
        // which is genuinely non-functional at i1 != 0.
        let f = parse_formula("i2 = i1 || i2 = -i1").unwrap();
        match normalize_definable_fn(&f, 1) {
            Err(DefFnError::NotFunctional { arg, lo, hi }) => {
                assert_ne!(lo, hi);
                assert_eq!(arg.len(), 1);
            }
            other => panic!("expected NotFunctional, got {other:?}"),
        }
    }

    #[test]
    fn rejects_partial() {
        // Defined only on even arguments.
        let f = parse_formula("i1 = 2*i2").unwrap();
        match normalize_definable_fn(&f, 1) {
            Err(DefFnError::NotTotal { witness }) => assert_eq!(witness.len(), 1),
            other => panic!("expected NotTotal, got {other:?}"),
        }
    }
}
