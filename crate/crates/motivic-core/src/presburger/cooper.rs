//! Quantifier elimination over the integers in the style of Cooper: atoms
//! are scaled to unit coefficient on the eliminated variable, equalities
//! expand into inequality pairs, and the eliminated formula is the standard
//! disjunction over the divisibility period and the lower-bound terms.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::formula::{Formula, Sort};
use crate::Int;

use super::qf::{count_quantifiers, formula_to_qf, qf_to_formula, LinTerm, QAtom, Qf};
use super::PresburgerError;

/// Resource guard on the elimination period; inputs at desk scale stay far
/// below this.
const MAX_PERIOD: u64 = 200_000;

fn lcm_abs(acc: Int, v: &Int) -> Int {
    if v.is_zero() {
        acc
    } else {
        acc.lcm(&v.abs())
    }
}

/// Least common multiple of the coefficients of `col` across all atoms;
/// None when the column does not occur.
fn column_lcm(phi: &Qf, col: usize) -> Option<Int> {
    fn walk(phi: &Qf, col: usize, acc: &mut Option<Int>) {
        match phi {
            Qf::Top | Qf::Bot => {}
            Qf::Atom(a) => {
                let t = match a {
                    QAtom::Le(t) | QAtom::Eq(t) | QAtom::Ne(t) => t,
                    QAtom::Div(_, t) | QAtom::NotDiv(_, t) => t,
                };
                let c = t.coeff(col);
                if !c.is_zero() {
                    *acc = Some(match acc.take() {
                        None => c.abs(),
                        Some(l) => lcm_abs(l, c),
                    });
                }
            }
            Qf::And(fs) | Qf::Or(fs) => {
                for f in fs {
                    walk(f, col, acc);
                }
            }
        }
    }
    let mut acc = None;
    walk(phi, col, &mut acc);
    acc
}

/// Scale atoms so the eliminated column has coefficient +-1 (conceptually
/// substituting `X = delta * x`), expanding equalities and disequalities on
/// the column into `Le` atoms.
fn unify_coefficient(phi: &Qf, col: usize, delta: &Int) -> Qf {
    match phi {
        Qf::Top | Qf::Bot => phi.clone(),
        Qf::And(fs) => Qf::And(fs.iter().map(|f| unify_coefficient(f, col, delta)).collect()),
        Qf::Or(fs) => Qf::Or(fs.iter().map(|f| unify_coefficient(f, col, delta)).collect()),
        Qf::Atom(a) => {
            let coeff = match a {
                QAtom::Le(t) | QAtom::Eq(t) | QAtom::Ne(t) => t.coeff(col).clone(),
                QAtom::Div(_, t) | QAtom::NotDiv(_, t) => t.coeff(col).clone(),
            };
            if coeff.is_zero() {
                return phi.clone();
            }
            let k = delta / coeff.abs();
            let sign = if coeff.is_positive() { Int::one() } else { -Int::one() };
            match a {
                QAtom::Le(t) => {
                    let mut s = t.scale(&k);
                    s.coeffs[col] = sign;
                    Qf::Atom(QAtom::Le(s))
                }
                QAtom::Eq(t) => {
                    let mut s = t.scale(&k);
                    s.coeffs[col] = sign;
                    // X = e as a pair of bounds.
                    Qf::And(vec![
                        Qf::Atom(QAtom::Le(s.clone())),
                        Qf::Atom(QAtom::Le(s.neg())),
                    ])
                }
                QAtom::Ne(t) => {
                    let mut s = t.scale(&k);
                    s.coeffs[col] = sign;
                    let one = Int::one();
                    Qf::Or(vec![
                        Qf::Atom(QAtom::Le(s.add_const(&one))),
                        Qf::Atom(QAtom::Le(s.neg().add_const(&one))),
                    ])
                }
                QAtom::Div(m, t) | QAtom::NotDiv(m, t) => {
                    let mut s = t.scale(&k);
                    s.coeffs[col] = sign.clone();
                    if sign.is_negative() {
                        s = s.neg();
                    }
                    let m2 = m * &k;
                    if matches!(a, QAtom::Div(..)) {
                        Qf::Atom(QAtom::Div(m2, s))
                    } else {
                        Qf::Atom(QAtom::NotDiv(m2, s))
                    }
                }
            }
        }
    }
}

/// Moduli of divisibility atoms on the column, and lower-bound terms
/// (`b` such that some atom reads `b < X`).
fn collect_period_and_bounds(phi: &Qf, col: usize, period: &mut Int, bounds: &mut Vec<LinTerm>) {
    match phi {
        Qf::Top | Qf::Bot => {}
        Qf::And(fs) | Qf::Or(fs) => {
            for f in fs {
                collect_period_and_bounds(f, col, period, bounds);
            }
        }
        Qf::Atom(QAtom::Div(m, t)) | Qf::Atom(QAtom::NotDiv(m, t)) => {
            if !t.coeff(col).is_zero() {
                *period = period.lcm(m);
            }
        }
        Qf::Atom(QAtom::Le(t)) => {
            let c = t.coeff(col);
            if c.is_negative() {
                // -X + r <= 0, i.e. r <= X; boundary term is r - 1.
                let mut r = t.clone();
                r.coeffs[col] = Int::zero();
                bounds.push(r.add_const(&-Int::one()));
            }
        }
        Qf::Atom(_) => {}
    }
}

/// Substitute `col := s` throughout; `minus_infinity` additionally resolves
/// the inequalities on the column to their limit values.
fn substitute_column(phi: &Qf, col: usize, s: &LinTerm, minus_infinity: bool) -> Qf {
    match phi {
        Qf::Top | Qf::Bot => phi.clone(),
        Qf::And(fs) => Qf::And(
            fs.iter()
                .map(|f| substitute_column(f, col, s, minus_infinity))
                .collect(),
        ),
        Qf::Or(fs) => Qf::Or(
            fs.iter()
                .map(|f| substitute_column(f, col, s, minus_infinity))
                .collect(),
        ),
        Qf::Atom(a) => {
            let coeff = match a {
                QAtom::Le(t) | QAtom::Eq(t) | QAtom::Ne(t) => t.coeff(col).clone(),
                QAtom::Div(_, t) | QAtom::NotDiv(_, t) => t.coeff(col).clone(),
            };
            if coeff.is_zero() {
                return phi.clone();
            }
            if minus_infinity {
                if let QAtom::Le(_) = a {
                    // X -> -infinity: X <= u holds, l <= X fails.
                    return if coeff.is_positive() { Qf::Top } else { Qf::Bot };
                }
            }
            match a {
                QAtom::Le(t) => Qf::Atom(QAtom::Le(t.subst_col(col, s))),
                QAtom::Eq(t) => Qf::Atom(QAtom::Eq(t.subst_col(col, s))),
                QAtom::Ne(t) => Qf::Atom(QAtom::Ne(t.subst_col(col, s))),
                QAtom::Div(m, t) => Qf::Atom(QAtom::Div(m.clone(), t.subst_col(col, s))),
                QAtom::NotDiv(m, t) => {
                    Qf::Atom(QAtom::NotDiv(m.clone(), t.subst_col(col, s)))
                }
            }
        }
    }
}

/// Eliminate `exists x_col` from a quantifier-free formula.
pub(crate) fn eliminate_column(phi: Qf, col: usize) -> Result<Qf, PresburgerError> {
    let phi = phi.simplify();
    let Some(delta) = column_lcm(&phi, col) else {
        return Ok(phi); // variable does not occur
    };
    let ncols = match &phi {
        Qf::Atom(QAtom::Le(t) | QAtom::Eq(t) | QAtom::Ne(t))
        | Qf::Atom(QAtom::Div(_, t) | QAtom::NotDiv(_, t)) => t.coeffs.len(),
        _ => find_ncols(&phi).unwrap_or(0),
    };

    let unified = unify_coefficient(&phi, col, &delta);
    let with_div = Qf::And(vec![
        unified,
        Qf::Atom(QAtom::Div(delta.clone(), LinTerm::var(ncols, col))),
    ]);

    let mut period = delta.clone();
    let mut bounds: Vec<LinTerm> = Vec::new();
    collect_period_and_bounds(&with_div, col, &mut period, &mut bounds);
    bounds.sort();
    bounds.dedup();

    let period_u: u64 = period
        .clone()
        .try_into()
        .ok()
        .filter(|&p| p <= MAX_PERIOD)
        .ok_or(PresburgerError::PeriodOverflow)?;

    let mut cases = Vec::new();
    for j in 1..=period_u {
        let s = LinTerm::constant(ncols, Int::from(j));
        cases.push(substitute_column(&with_div, col, &s, true));
    }
    for b in &bounds {
        for j in 1..=period_u {
            let s = b.add_const(&Int::from(j));
            cases.push(substitute_column(&with_div, col, &s, false));
        }
    }
    Ok(Qf::Or(cases).simplify())
}

fn find_ncols(phi: &Qf) -> Option<usize> {
    match phi {
        Qf::Top | Qf::Bot => None,
        Qf::Atom(
            QAtom::Le(t) | QAtom::Eq(t) | QAtom::Ne(t) | QAtom::Div(_, t) | QAtom::NotDiv(_, t),
        ) => Some(t.coeffs.len()),
        Qf::And(fs) | Qf::Or(fs) => fs.iter().find_map(find_ncols),
    }
}

fn elim_rec(
    f: &Formula,
    ncols: usize,
    binder_cols: &mut Vec<usize>,
    next_col: &mut usize,
) -> Result<Qf, PresburgerError> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => {
            formula_to_qf(f, ncols, binder_cols, true)?
        }
        Formula::Not(g) => elim_rec(g, ncols, binder_cols, next_col)?.negate(),
        Formula::And(a, b) => Qf::And(vec![
            elim_rec(a, ncols, binder_cols, next_col)?,
            elim_rec(b, ncols, binder_cols, next_col)?,
        ]),
        Formula::Or(a, b) => Qf::Or(vec![
            elim_rec(a, ncols, binder_cols, next_col)?,
            elim_rec(b, ncols, binder_cols, next_col)?,
        ]),
        Formula::Exists(binder, body) | Formula::Forall(binder, body) => {
            if binder.sort != Sort::Ord {
                return Err(PresburgerError::NotPresburger(
                    "quantifier over a non-Ord sort".to_string(),
                ));
            }
            let universal = matches!(f, Formula::Forall(..));
            let col = *next_col;
            *next_col += 1;
            binder_cols.push(col);
            let inner = elim_rec(body, ncols, binder_cols, next_col);
            binder_cols.pop();
            let inner = inner?;
            if universal {
                eliminate_column(inner.negate(), col)?.negate().simplify()
            } else {
                eliminate_column(inner, col)?
            }
        }
    })
}

/// Quantifier elimination for Presburger formulas (context `(0,0,r)`).
/// The result is quantifier-free and equivalent over `Z^r`, with atoms in
/// the canonical `<=` / `=` / `mod` normal form.
pub fn eliminate_quantifiers(f: &Formula) -> Result<Formula, PresburgerError> {
    let ctx = crate::formula::free_context(f);
    if ctx.val > 0 || ctx.res > 0 {
        return Err(PresburgerError::NotPresburger(
            "formula has Val or Res free variables".to_string(),
        ));
    }
    crate::formula::check_formula(f)
        .map_err(|e| PresburgerError::NotPresburger(e.msg))?;
    let ncols = ctx.ord + count_quantifiers(f);
    let mut next_col = ctx.ord;
    let qf = elim_rec(f, ncols, &mut Vec::new(), &mut next_col)?.simplify();
    Ok(qf_to_formula(&qf))
}

/// Quantifier-free internal form of a formula, eliminating quantifiers when
/// present. Shared entry point for the decomposition routines.
pub(crate) fn to_qf_eliminated(f: &Formula, arity: usize) -> Result<Qf, PresburgerError> {
    let ctx = crate::formula::free_context(f);
    if ctx.val > 0 || ctx.res > 0 {
        return Err(PresburgerError::NotPresburger(
            "formula has Val or Res free variables".to_string(),
        ));
    }
    if ctx.ord > arity {
        return Err(PresburgerError::NotPresburger(alloc::format!(
            "formula uses i{} beyond arity {arity}",
            ctx.ord
        )));
    }
    let nq = count_quantifiers(f);
    let ncols = arity + nq;
    let mut next_col = arity;
    let qf = elim_rec(f, ncols, &mut Vec::new(), &mut next_col)?.simplify();
    // Shrink the universe back to the declared arity.
    Ok(truncate_columns(&qf, arity))
}

fn truncate_columns(phi: &Qf, arity: usize) -> Qf {
    fn cut(t: &LinTerm, arity: usize) -> LinTerm {
        debug_assert!(t.coeffs[arity..].iter().all(|c| c.is_zero()));
        LinTerm {
            coeffs: t.coeffs[..arity].to_vec(),
            constant: t.constant.clone(),
        }
    }
    match phi {
        Qf::Top => Qf::Top,
        Qf::Bot => Qf::Bot,
        Qf::Atom(QAtom::Le(t)) => Qf::Atom(QAtom::Le(cut(t, arity))),
        Qf::Atom(QAtom::Eq(t)) => Qf::Atom(QAtom::Eq(cut(t, arity))),
        Qf::Atom(QAtom::Ne(t)) => Qf::Atom(QAtom::Ne(cut(t, arity))),
        Qf::Atom(QAtom::Div(m, t)) => Qf::Atom(QAtom::Div(m.clone(), cut(t, arity))),
        Qf::Atom(QAtom::NotDiv(m, t)) => {
            Qf::Atom(QAtom::NotDiv(m.clone(), cut(t, arity)))
        }
        Qf::And(fs) => Qf::And(fs.iter().map(|f| truncate_columns(f, arity)).collect()),
        Qf::Or(fs) => Qf::Or(fs.iter().map(|f| truncate_columns(f, arity)).collect()),
    }
}
