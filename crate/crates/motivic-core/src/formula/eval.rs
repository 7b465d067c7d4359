//! Exact evaluation of quantifier-free formulas at points of `h[m,n,r]`.
//!
//! The structure is `(Q((t)), Q, Z)` with Val coordinates restricted to
//! Laurent polynomials: `ord` reads the lowest t-exponent, `ac` its
//! coefficient. `ord 0` is the sentinel `+infinity`; comparisons follow the
//! order completion, congruences involving an infinite value are false.

use alloc::format;
use alloc::string::{String, ToString};

use num_traits::{Signed, Zero};

use crate::poly::Laurent;
use crate::{Int, Rat};

use super::{Atom, Formula, Point, Sort, Term};

/// Z extended by the two infinities (only `+infinity` arises from `ord`,
/// but negation is closed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtInt {
    NegInf,
    Fin(Int),
    PosInf,
}

impl ExtInt {
    pub fn finite(&self) -> Option<&Int> {
        match self {
            ExtInt::Fin(n) => Some(n),
            _ => None,
        }
    }

    fn add(&self, other: &ExtInt) -> Result<ExtInt, EvalError> {
        use ExtInt::*;
        Ok(match (self, other) {
            (Fin(a), Fin(b)) => Fin(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                return Err(EvalError::IndeterminateInfinity)
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        })
    }

    fn neg(&self) -> ExtInt {
        match self {
            ExtInt::Fin(n) => ExtInt::Fin(-n),
            ExtInt::PosInf => ExtInt::NegInf,
            ExtInt::NegInf => ExtInt::PosInf,
        }
    }

    fn mul(&self, other: &ExtInt) -> Result<ExtInt, EvalError> {
        use ExtInt::*;
        Ok(match (self, other) {
            (Fin(a), Fin(b)) => Fin(a * b),
            (Fin(a), inf) | (inf, Fin(a)) => {
                // 0 * infinity = 0 by convention.
                if a.is_zero() {
                    Fin(Int::zero())
                } else if a.is_positive() {
                    inf.clone()
                } else {
                    inf.neg()
                }
            }
            (PosInf, PosInf) | (NegInf, NegInf) => PosInf,
            _ => NegInf,
        })
    }

    fn le(&self, other: &ExtInt) -> bool {
        use ExtInt::*;
        match (self, other) {
            (NegInf, _) | (_, PosInf) => true,
            (PosInf, o) => matches!(o, PosInf),
            (s, NegInf) => matches!(s, NegInf),
            (Fin(a), Fin(b)) => a <= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Val(Laurent<Rat>),
    Res(Rat),
    Ord(ExtInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// A quantifier remained; names the quantified sort.
    ResidualQuantifier(Sort),
    ContextMismatch(String),
    /// `infinity - infinity` style arithmetic.
    IndeterminateInfinity,
    UnboundVariable(usize),
    SortMismatch(String),
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalError::ResidualQuantifier(s) => {
                write!(f, "residual quantifier in the {s:?} sort")
            }
            EvalError::ContextMismatch(m) => write!(f, "context mismatch: {m}"),
            EvalError::IndeterminateInfinity => {
                write!(f, "indeterminate arithmetic on infinity")
            }
            EvalError::UnboundVariable(k) => write!(f, "unbound de Bruijn index {k}"),
            EvalError::SortMismatch(m) => write!(f, "sort mismatch: {m}"),
        }
    }
}

/// Evaluate a term at a point (no bound variables allowed).
pub fn evaluate_term(t: &Term, p: &Point) -> Result<Value, EvalError> {
    match t {
        Term::FreeVar(Sort::Val, k) => p
            .val
            .get(*k)
            .map(|v| Value::Val(v.clone()))
            .ok_or_else(|| EvalError::ContextMismatch(format!("missing x{}", k + 1))),
        Term::FreeVar(Sort::Res, k) => p
            .res
            .get(*k)
            .map(|v| Value::Res(v.clone()))
            .ok_or_else(|| EvalError::ContextMismatch(format!("missing u{}", k + 1))),
        Term::FreeVar(Sort::Ord, k) => p
            .ord
            .get(*k)
            .map(|v| Value::Ord(ExtInt::Fin(v.clone())))
            .ok_or_else(|| EvalError::ContextMismatch(format!("missing i{}", k + 1))),
        Term::BoundVar(k) => Err(EvalError::UnboundVariable(*k)),
        Term::ValConst(l) => Ok(Value::Val(l.clone())),
        Term::ResConst(q) => Ok(Value::Res(q.clone())),
        Term::OrdConst(n) => Ok(Value::Ord(ExtInt::Fin(n.clone()))),
        Term::Add(a, b) => binop(t, p, a, b, "+"),
        Term::Sub(a, b) => binop(t, p, a, b, "-"),
        Term::Mul(a, b) => binop(t, p, a, b, "*"),
        Term::Neg(a) => match evaluate_term(a, p)? {
            Value::Val(v) => Ok(Value::Val(v.neg())),
            Value::Res(v) => Ok(Value::Res(-v)),
            Value::Ord(v) => Ok(Value::Ord(v.neg())),
        },
        Term::Ord(a) => match evaluate_term(a, p)? {
            Value::Val(v) => Ok(Value::Ord(match v.order() {
                Some(k) => ExtInt::Fin(Int::from(k)),
                None => ExtInt::PosInf,
            })),
            _ => Err(EvalError::SortMismatch("ord of a non-Val value".to_string())),
        },
        Term::Ac(a) => match evaluate_term(a, p)? {
            Value::Val(v) => Ok(Value::Res(v.leading_low())),
            _ => Err(EvalError::SortMismatch("ac of a non-Val value".to_string())),
        },
    }
}

fn binop(
    t: &Term,
    p: &Point,
    a: &Term,
    b: &Term,
    op: &str,
) -> Result<Value, EvalError> {
    let va = evaluate_term(a, p)?;
    let vb = evaluate_term(b, p)?;
    match (va, vb) {
        (Value::Val(x), Value::Val(y)) => Ok(Value::Val(match op {
            "+" => x.add(&y),
            "-" => x.sub(&y),
            _ => x.mul(&y),
        })),
        (Value::Res(x), Value::Res(y)) => Ok(Value::Res(match op {
            "+" => x + y,
            "-" => x - y,
            _ => x * y,
        })),
        (Value::Ord(x), Value::Ord(y)) => Ok(Value::Ord(match op {
            "+" => x.add(&y)?,
            "-" => x.add(&y.neg())?,
            _ => x.mul(&y)?,
        })),
        _ => Err(EvalError::SortMismatch(format!(
            "mixed sorts in `{}`",
            super::print_term(t)
        ))),
    }
}

fn eval_atom(a: &Atom, p: &Point) -> Result<bool, EvalError> {
    match a {
        Atom::Eq(x, y) => {
            let vx = evaluate_term(x, p)?;
            let vy = evaluate_term(y, p)?;
            match (vx, vy) {
                (Value::Val(a), Value::Val(b)) => Ok(a == b),
                (Value::Res(a), Value::Res(b)) => Ok(a == b),
                (Value::Ord(a), Value::Ord(b)) => Ok(a == b),
                _ => Err(EvalError::SortMismatch("equality across sorts".to_string())),
            }
        }
        Atom::Le(x, y) => {
            let vx = evaluate_term(x, p)?;
            let vy = evaluate_term(y, p)?;
            match (vx, vy) {
                (Value::Ord(a), Value::Ord(b)) => Ok(a.le(&b)),
                _ => Err(EvalError::SortMismatch("<= on non-Ord values".to_string())),
            }
        }
        Atom::Cong { modulus, lhs, rhs } => {
            let vl = evaluate_term(lhs, p)?;
            let vr = evaluate_term(rhs, p)?;
            match (vl, vr) {
                (Value::Ord(ExtInt::Fin(a)), Value::Ord(ExtInt::Fin(b))) => {
                    let m = Int::from(*modulus);
                    use num_integer::Integer as _;
                    Ok((a - b).mod_floor(&m).is_zero())
                }
                // Congruences have no meaning at infinity.
                (Value::Ord(_), Value::Ord(_)) => Ok(false),
                _ => Err(EvalError::SortMismatch(
                    "congruence on non-Ord values".to_string(),
                )),
            }
        }
    }
}

/// Evaluate a quantifier-free formula at a point. Ord-sort quantifiers must
/// be eliminated first (see the Presburger engine); Val and Res quantifiers
/// are never evaluated.
pub fn evaluate_qf(f: &Formula, p: &Point) -> Result<bool, EvalError> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Atom(a) => eval_atom(a, p),
        Formula::Not(g) => Ok(!evaluate_qf(g, p)?),
        Formula::And(a, b) => Ok(evaluate_qf(a, p)? && evaluate_qf(b, p)?),
        Formula::Or(a, b) => Ok(evaluate_qf(a, p)? || evaluate_qf(b, p)?),
        Formula::Exists(b, _) | Formula::Forall(b, _) => {
            Err(EvalError::ResidualQuantifier(b.sort))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::poly::Poly;
    use crate::rat;
    use alloc::vec;

    fn pt_val(coeffs: &[(i64, i64)]) -> Point {
        // coeffs: list of (exponent, numerator) with denominator 1
        let mut poly = Laurent::zero();
        for &(e, c) in coeffs {
            poly = poly.add(&Laurent::monomial(rat(c, 1), e));
        }
        Point::new(vec![poly], vec![], vec![])
    }

    #[test]
    fn ord_and_ac() {
        // x1 = 3t + t^2
        let mut p = pt_val(&[(1, 3), (2, 1)]);
        p.res = vec![rat(3, 1)];
        p.ord = vec![Int::from(1)];
        let f = parse_formula("ord(x1) = 1").unwrap();
        assert!(evaluate_qf(&f, &p).unwrap());
        let f = parse_formula("ac(x1) = u1").unwrap();
        assert!(evaluate_qf(&f, &p).unwrap());
        let f = parse_formula("ord(x1) = i1").unwrap();
        assert!(evaluate_qf(&f, &p).unwrap());
    }

    #[test]
    fn ord_zero_is_plus_infinity() {
        let p = pt_val(&[]);
        let f = parse_formula("ord(x1) >= 5").unwrap();
        assert!(evaluate_qf(&f, &p).unwrap());
        let f = parse_formula("ord(x1) = 5").unwrap();
        assert!(!evaluate_qf(&f, &p).unwrap());
        let f = parse_formula("ac(x1) = 0").unwrap();
        assert!(evaluate_qf(&f, &p).unwrap());
        let f = parse_formula("mod(ord(x1), 2) = 0").unwrap();
        assert!(!evaluate_qf(&f, &p).unwrap());
    }

    #[test]
    fn boolean_structure() {
        let p = Point::ord_point(&[4]);
        let f = parse_formula("i1 >= 0 && mod(i1, 2) = 0").unwrap();
        assert!(evaluate_qf(&f, &p).unwrap());
        let g = parse_formula("i1 < 0 || i1 != 4").unwrap();
        assert!(!evaluate_qf(&g, &p).unwrap());
    }

    #[test]
    fn rejects_quantifiers() {
        let f = parse_formula("exists y:V (x1 = y*y)").unwrap();
        let p = pt_val(&[(0, 1)]);
        assert_eq!(
            evaluate_qf(&f, &p),
            Err(EvalError::ResidualQuantifier(Sort::Val))
        );
    }

    #[test]
    fn laurent_poly_struct_smoke() {
        let v: Laurent<Rat> = Laurent::from_poly(
            Poly::from_coeffs(vec![rat(1, 2)]),
            -1,
        );
        assert_eq!(v.order(), Some(-1));
    }
}
