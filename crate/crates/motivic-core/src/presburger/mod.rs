//! Presburger engine: quantifier elimination over the Ord sort and
//! normalization of definable sets and functions into explicit lattice-cone
//! geometry.
//!
//! A [`LinearPiece`] describes `(apex + N-span of the generators)`
//! intersected with a lattice coset, plus finitely many translated copies
//! (`bounded_part`); the decomposition routines emit the normalized form
//! where the coset is all of `Z^r` and `bounded_part` is empty, with the
//! congruence data absorbed into the generators.

mod cooper;
mod deffn;
mod pieces;
pub(crate) mod qf;

pub use cooper::eliminate_quantifiers;
pub use deffn::{normalize_definable_fn, AffineValue, DefFnError, PiecewiseLinearFn};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::formula::Formula;
use crate::linalg::rat_solve;
use crate::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresburgerError {
    /// Val or Res content where only the Ord sort is allowed.
    NotPresburger(String),
    /// A product of two non-constant Ord terms.
    Nonlinear(String),
    /// Elimination period beyond the resource guard.
    PeriodOverflow,
    /// A decomposition enumeration box beyond the resource guard.
    EnumerationOverflow,
}

impl core::fmt::Display for PresburgerError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PresburgerError::NotPresburger(m) => write!(f, "not a Presburger formula: {m}"),
            PresburgerError::Nonlinear(t) => write!(f, "nonlinear Ord term `{t}`"),
            PresburgerError::PeriodOverflow => write!(f, "elimination period too large"),
            PresburgerError::EnumerationOverflow => {
                write!(f, "piece enumeration too large")
            }
        }
    }
}

/// Disjoint piece of a Presburger subset of `Z^r`.
///
/// The represented set is the union over `delta` in `{0} + bounded_part`
/// of `{apex + delta + sum c_j generators_j : c_j >= 0}` intersected with
/// the coset `coset_rep + lattice`. Decomposition output is normalized:
/// identity lattice, empty `bounded_part`, and the generators linearly
/// independent, so membership has unique coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearPiece {
    pub apex: Vec<Int>,
    pub generators: Vec<Vec<Int>>,
    /// Rows span the coset lattice; the identity matrix means all of `Z^r`.
    pub lattice_basis: Vec<Vec<Int>>,
    pub coset_rep: Vec<Int>,
    /// Additional apex translates (fundamental-parallelepiped corrections).
    pub bounded_part: Vec<Vec<Int>>,
}

impl LinearPiece {
    /// Piece with the trivial coset and no corrections.
    pub fn plain(apex: Vec<Int>, generators: Vec<Vec<Int>>) -> Self {
        let dim = apex.len();
        LinearPiece {
            apex,
            generators,
            lattice_basis: (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| if i == j { Int::one() } else { Int::zero() })
                        .collect()
                })
                .collect(),
            coset_rep: vec![Int::zero(); dim],
            bounded_part: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.apex.len()
    }

    fn lattice_is_trivial(&self) -> bool {
        self.lattice_basis.len() == self.apex.len()
            && self
                .lattice_basis
                .iter()
                .enumerate()
                .all(|(i, row)| {
                    row.iter().enumerate().all(|(j, v)| {
                        if i == j {
                            v.is_one()
                        } else {
                            v.is_zero()
                        }
                    })
                })
            && self.coset_rep.iter().all(|v| v.is_zero())
    }

    /// Nonnegative integer coordinates of `x - base` in the generators,
    /// when they exist (generators are linearly independent).
    fn semigroup_coords(&self, x: &[Int], base: &[Int]) -> Option<Vec<Int>> {
        let y: Vec<Rat> = x
            .iter()
            .zip(base)
            .map(|(a, b)| Rat::from_integer(a - b))
            .collect();
        if self.generators.is_empty() {
            return if y.iter().all(|v| v.is_zero()) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let sys: Vec<Vec<Rat>> = (0..self.ambient_dim())
            .map(|k| {
                self.generators
                    .iter()
                    .map(|g| Rat::from_integer(g[k].clone()))
                    .collect()
            })
            .collect();
        let sol = rat_solve(&sys, &y)?;
        // Verify (the system may be overdetermined).
        for (k, row) in sys.iter().enumerate() {
            let mut acc = Rat::zero();
            for (a, c) in row.iter().zip(&sol) {
                acc += a.clone() * c.clone();
            }
            if acc != y[k] {
                return None;
            }
        }
        let mut coords = Vec::with_capacity(sol.len());
        for c in sol {
            if !c.is_integer() || c.is_negative() {
                return None;
            }
            coords.push(c.to_integer());
        }
        Some(coords)
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Int]) -> bool {
        assert_eq!(x.len(), self.ambient_dim());
        if !self.lattice_is_trivial() {
            let y: Vec<Rat> = x
                .iter()
                .zip(&self.coset_rep)
                .map(|(a, b)| Rat::from_integer(a - b))
                .collect();
            let sys: Vec<Vec<Rat>> = (0..self.ambient_dim())
                .map(|k| {
                    self.lattice_basis
                        .iter()
                        .map(|b| Rat::from_integer(b[k].clone()))
                        .collect()
                })
                .collect();
            match rat_solve(&sys, &y) {
                None => return false,
                Some(sol) => {
                    let mut ok = true;
                    for (k, row) in sys.iter().enumerate() {
                        let mut acc = Rat::zero();
                        for (a, c) in row.iter().zip(&sol) {
                            acc += a.clone() * c.clone();
                        }
                        if acc != y[k] {
                            ok = false;
                            break;
                        }
                    }
                    if !ok || sol.iter().any(|c| !c.is_integer()) {
                        return false;
                    }
                }
            }
        }
        if self.semigroup_coords(x, &self.apex).is_some() {
            return true;
        }
        for delta in &self.bounded_part {
            let base: Vec<Int> = self.apex.iter().zip(delta).map(|(a, d)| a + d).collect();
            if self.semigroup_coords(x, &base).is_some() {
                return true;
            }
        }
        false
    }

    /// Coordinates of a point of a normalized piece (trivial coset, empty
    /// corrections); None when the point is outside.
    pub fn coordinates(&self, x: &[Int]) -> Option<Vec<Int>> {
        self.semigroup_coords(x, &self.apex)
    }
}

/// Decompose the solution set of a quantifier-free Presburger formula into
/// pairwise disjoint pieces covering it exactly. Residual quantifiers are
/// eliminated first.
pub fn to_linear_pieces(
    f: &Formula,
    arity: usize,
) -> Result<Vec<LinearPiece>, PresburgerError> {
    let qf = cooper::to_qf_eliminated(f, arity)?;
    pieces::qf_to_pieces(&qf, arity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{evaluate_qf, parse_formula, Point};

    fn brute_check(src: &str, arity: usize, lo: i64, hi: i64) {
        let f = parse_formula(src).unwrap();
        let qf = eliminate_quantifiers(&f).unwrap();
        assert!(!qf.has_quantifier());
        let pieces = to_linear_pieces(&f, arity).unwrap();
        let mut coords = alloc::vec![lo; arity];
        loop {
            let p = Point::ord_point(&coords);
            let want = evaluate_qf(&qf, &p).unwrap();
            let hits: usize = pieces
                .iter()
                .filter(|piece| {
                    piece.contains(&coords.iter().map(|&c| Int::from(c)).collect::<Vec<_>>())
                })
                .count();
            assert!(
                hits <= 1,
                "point {coords:?} of `{src}` lies in {hits} pieces"
            );
            assert_eq!(
                hits == 1,
                want,
                "coverage mismatch at {coords:?} for `{src}`"
            );
            let mut k = 0;
            loop {
                if k == arity {
                    return;
                }
                coords[k] += 1;
                if coords[k] <= hi {
                    break;
                }
                coords[k] = lo;
                k += 1;
            }
        }
    }

    fn qe_matches_quantified(src: &str, arity: usize, lo: i64, hi: i64, witness_bound: i64) {
        let f = parse_formula(src).unwrap();
        let qf = eliminate_quantifiers(&f).unwrap();
        let mut coords = alloc::vec![lo; arity];
        loop {
            let p = Point::ord_point(&coords);
            let got = evaluate_qf(&qf, &p).unwrap();
            let want = brute_quantified(&f, &coords, witness_bound);
            assert_eq!(got, want, "QE mismatch at {coords:?} for `{src}`");
            let mut k = 0;
            loop {
                if k == arity {
                    return;
                }
                coords[k] += 1;
                if coords[k] <= hi {
                    break;
                }
                coords[k] = lo;
                k += 1;
            }
        }
    }

    /// Brute-force semantics with bounded witness search (bound chosen per
    /// test case to be safely beyond all relevant boundary terms).
    fn brute_quantified(f: &crate::formula::Formula, outer: &[i64], bound: i64) -> bool {
        use crate::formula::Formula as F;
        fn go(f: &F, env: &mut Vec<i64>, outer: &[i64], bound: i64) -> bool {
            match f {
                F::Exists(_, body) => (-bound..=bound).any(|v| {
                    env.push(v);
                    let r = go(body, env, outer, bound);
                    env.pop();
                    r
                }),
                F::Forall(_, body) => (-bound..=bound).all(|v| {
                    env.push(v);
                    let r = go(body, env, outer, bound);
                    env.pop();
                    r
                }),
                F::Not(g) => !go(g, env, outer, bound),
                F::And(a, b) => go(a, env, outer, bound) && go(b, env, outer, bound),
                F::Or(a, b) => go(a, env, outer, bound) || go(b, env, outer, bound),
                F::True => true,
                F::False => false,
                F::Atom(_) => {
                    // Substitute bound variables by their environment values.
                    let g = crate::presburger::tests::subst_bound(f, env);
                    let p = Point::ord_point(outer);
                    evaluate_qf(&g, &p).unwrap()
                }
            }
        }
        go(f, &mut Vec::new(), outer, bound)
    }

    pub(crate) fn subst_bound(f: &crate::formula::Formula, env: &[i64]) -> crate::formula::Formula {
        use crate::formula::{Atom, Formula as F, Term};
        fn term(t: &Term, env: &[i64]) -> Term {
            match t {
                Term::BoundVar(k) => {
                    let idx = env.len() - 1 - k;
                    Term::ord_const(env[idx])
                }
                Term::Add(a, b) => Term::add(term(a, env), term(b, env)),
                Term::Sub(a, b) => Term::sub(term(a, env), term(b, env)),
                Term::Mul(a, b) => Term::mul(term(a, env), term(b, env)),
                Term::Neg(a) => Term::neg(term(a, env)),
                Term::Ord(a) => Term::ord_of(term(a, env)),
                Term::Ac(a) => Term::ac_of(term(a, env)),
                other => other.clone(),
            }
        }
        match f {
            F::Atom(Atom::Eq(a, b)) => F::eq(term(a, env), term(b, env)),
            F::Atom(Atom::Le(a, b)) => F::le(term(a, env), term(b, env)),
            F::Atom(Atom::Cong { modulus, lhs, rhs }) => {
                F::cong(*modulus, term(lhs, env), term(rhs, env))
            }
            _ => unreachable!("atoms only"),
        }
    }

    #[test]
    fn qe_divisibility_examples() {
        // exists j (i1 = 2j)  <=>  i1 = 0 mod 2
        qe_matches_quantified("exists j:Z (i1 = 2*j)", 1, -50, 50, 120);
        // exists j (i1 <= 3j && 3j <= i1 + 1)
        qe_matches_quantified(
            "exists j:Z (i1 <= 3*j && 3*j <= i1 + 1)",
            1,
            -50,
            50,
            120,
        );
    }

    #[test]
    fn qe_mixed() {
        qe_matches_quantified("forall j:Z (j <= i1 || mod(j, 2) = 0)", 1, -10, 10, 80);
        qe_matches_quantified(
            "exists j:Z (2*j <= i1 && i2 <= j && mod(j, 3) = 1)",
            2,
            -12,
            12,
            80,
        );
        qe_matches_quantified(
            "exists a:Z exists b:Z (i1 = 2*a + 3*b && 0 <= a && 0 <= b)",
            1,
            -20,
            20,
            80,
        );
    }

    #[test]
    fn qe_leaves_qf_input_equivalent() {
        qe_matches_quantified("i1 <= 3 && mod(i1, 2) = 1", 1, -20, 20, 10);
    }

    #[test]
    fn pieces_half_line() {
        let pieces = to_linear_pieces(&parse_formula("i1 >= 0").unwrap(), 1).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].apex, alloc::vec![Int::zero()]);
        assert_eq!(pieces[0].generators.len(), 1);
        assert_eq!(pieces[0].generators[0], alloc::vec![Int::one()]);
    }

    #[test]
    fn pieces_congruence_shift() {
        let pieces =
            to_linear_pieces(&parse_formula("mod(i1, 2) = 0 && i1 >= 3").unwrap(), 1)
                .unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].apex, alloc::vec![Int::from(4)]);
        assert_eq!(pieces[0].generators[0], alloc::vec![Int::from(2)]);
        brute_check("mod(i1, 2) = 0 && i1 >= 3", 1, -20, 100);
    }

    #[test]
    fn pieces_simplex_enumeration() {
        let pieces = to_linear_pieces(
            &parse_formula("i1 >= 0 && i2 >= 0 && i1 + i2 <= 5").unwrap(),
            2,
        )
        .unwrap();
        let apex_only = pieces.iter().filter(|p| p.generators.is_empty()).count();
        assert_eq!(apex_only, pieces.len());
        assert_eq!(pieces.len(), 21);
        brute_check("i1 >= 0 && i2 >= 0 && i1 + i2 <= 5", 2, -3, 8);
    }

    #[test]
    fn pieces_cover_assorted_sets() {
        brute_check("i1 >= 2 || i1 <= -3", 1, -20, 20);
        brute_check("mod(i1, 3) = 1 || i1 = 0", 1, -15, 15);
        brute_check("i1 <= i2 && i2 <= i1 + 4", 2, -8, 8);
        brute_check("2*i1 + 3*i2 >= 1 && i1 <= 5", 2, -7, 7);
        brute_check("i1 + i2 >= 0 && i1 - i2 >= 0", 2, -6, 6);
        brute_check("mod(i1 + i2, 2) = 0 && i1 >= 0 && i2 >= 0", 2, -4, 9);
        brute_check("i1 = 3 && i2 >= 1", 2, -5, 6);
        brute_check("!(i1 = 0) && -3 <= i1 && i1 <= 3", 1, -6, 6);
        brute_check("true", 1, -6, 6);
        brute_check("i1 = i1", 1, -6, 6);
        brute_check("false", 2, -3, 3);
    }

    #[test]
    fn pieces_with_quantifier_input() {
        brute_check("exists j:Z (i1 = 2*j && j >= 1)", 1, -10, 30);
    }

    #[test]
    fn pieces_unconstrained_plane() {
        brute_check("i1 = i1 && i2 = i2", 2, -5, 5);
    }
}
