//! Internal linear-atom representation of quantifier-free Presburger
//! formulas, with conversions from and to the surface AST.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::formula::{Atom, Formula, Sort, Term};
use crate::Int;

use super::PresburgerError;

/// Linear form `sum coeffs[k] * v_k + constant` over a fixed column
/// universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct LinTerm {
    pub coeffs: Vec<Int>,
    pub constant: Int,
}

impl LinTerm {
    pub fn zero(ncols: usize) -> Self {
        LinTerm { coeffs: vec![Int::zero(); ncols], constant: Int::zero() }
    }

    pub fn constant(ncols: usize, c: Int) -> Self {
        LinTerm { coeffs: vec![Int::zero(); ncols], constant: c }
    }

    pub fn var(ncols: usize, col: usize) -> Self {
        let mut t = LinTerm::zero(ncols);
        t.coeffs[col] = Int::one();
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        LinTerm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LinTerm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            constant: &self.constant - &other.constant,
        }
    }

    pub fn neg(&self) -> Self {
        LinTerm {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
            constant: -self.constant.clone(),
        }
    }

    pub fn scale(&self, k: &Int) -> Self {
        LinTerm {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn add_const(&self, k: &Int) -> Self {
        let mut t = self.clone();
        t.constant += k;
        t
    }

    pub fn coeff(&self, col: usize) -> &Int {
        &self.coeffs[col]
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_zero())
    }

    /// Replace column `col` by the linear term `s` (which must have zero
    /// coefficient on `col`).
    pub fn subst_col(&self, col: usize, s: &LinTerm) -> Self {
        let a = self.coeffs[col].clone();
        let mut out = self.clone();
        out.coeffs[col] = Int::zero();
        if a.is_zero() {
            return out;
        }
        debug_assert!(s.coeffs[col].is_zero());
        out.add(&s.scale(&a))
    }

    pub fn eval(&self, point: &[Int]) -> Int {
        let mut acc = self.constant.clone();
        for (a, x) in self.coeffs.iter().zip(point) {
            if !a.is_zero() {
                acc += a * x;
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum QAtom {
    /// t <= 0
    Le(LinTerm),
    /// t = 0
    Eq(LinTerm),
    /// t != 0
    Ne(LinTerm),
    /// m | t, m >= 2
    Div(Int, LinTerm),
    /// not (m | t)
    NotDiv(Int, LinTerm),
}

impl QAtom {
    pub fn eval(&self, point: &[Int]) -> bool {
        match self {
            QAtom::Le(t) => !t.eval(point).is_positive(),
            QAtom::Eq(t) => t.eval(point).is_zero(),
            QAtom::Ne(t) => !t.eval(point).is_zero(),
            QAtom::Div(m, t) => t.eval(point).mod_floor(m).is_zero(),
            QAtom::NotDiv(m, t) => !t.eval(point).mod_floor(m).is_zero(),
        }
    }

    fn negate(&self) -> QAtom {
        match self {
            QAtom::Le(t) => QAtom::Le(t.neg().add_const(&Int::one())),
            QAtom::Eq(t) => QAtom::Ne(t.clone()),
            QAtom::Ne(t) => QAtom::Eq(t.clone()),
            QAtom::Div(m, t) => QAtom::NotDiv(m.clone(), t.clone()),
            QAtom::NotDiv(m, t) => QAtom::Div(m.clone(), t.clone()),
        }
    }

    /// Ground truth value when the atom has no variables.
    pub fn ground_value(&self) -> Option<bool> {
        let ok = |t: &LinTerm| t.is_ground();
        match self {
            QAtom::Le(t) if ok(t) => Some(!t.constant.is_positive()),
            QAtom::Eq(t) if ok(t) => Some(t.constant.is_zero()),
            QAtom::Ne(t) if ok(t) => Some(!t.constant.is_zero()),
            QAtom::Div(m, t) if ok(t) => Some(t.constant.mod_floor(m).is_zero()),
            QAtom::NotDiv(m, t) if ok(t) => Some(!t.constant.mod_floor(m).is_zero()),
            _ => None,
        }
    }

    /// Canonical tightening: divide by coefficient gcds, reduce moduli.
    pub fn normalize(self) -> QAtom {
        match self {
            QAtom::Le(t) => {
                let g = coeff_gcd(&t);
                if g.is_one() || g.is_zero() {
                    return QAtom::Le(t);
                }
                // sum a_k v_k + c <= 0 with g | a_k:
                // sum (a_k/g) v_k <= floor(-c/g)
                let bound = (-&t.constant).div_floor(&g);
                QAtom::Le(LinTerm {
                    coeffs: t.coeffs.iter().map(|a| a / &g).collect(),
                    constant: -bound,
                })
            }
            QAtom::Eq(t) => {
                let g = coeff_gcd(&t);
                if g.is_one() || g.is_zero() {
                    return QAtom::Eq(t);
                }
                if !(&t.constant % &g).is_zero() {
                    // No integer solutions; keep a ground-false atom.
                    return QAtom::Eq(LinTerm::constant(t.coeffs.len(), Int::one()));
                }
                QAtom::Eq(LinTerm {
                    coeffs: t.coeffs.iter().map(|a| a / &g).collect(),
                    constant: &t.constant / &g,
                })
            }
            QAtom::Ne(t) => match QAtom::Eq(t).normalize() {
                QAtom::Eq(t) => QAtom::Ne(t),
                _ => unreachable!(),
            },
            QAtom::Div(m, t) => normalize_div(m, t, false),
            QAtom::NotDiv(m, t) => normalize_div(m, t, true),
        }
    }
}

fn coeff_gcd(t: &LinTerm) -> Int {
    let mut g = Int::zero();
    for a in &t.coeffs {
        g = g.gcd(a);
    }
    g
}

fn normalize_div(m: Int, t: LinTerm, negated: bool) -> QAtom {
    // Divide modulus and term by gcd(m, coeffs, constant).
    let mut g = m.clone();
    for a in &t.coeffs {
        g = g.gcd(a);
    }
    g = g.gcd(&t.constant);
    let (m, mut t) = if g.is_one() {
        (m, t)
    } else {
        (
            &m / &g,
            LinTerm {
                coeffs: t.coeffs.iter().map(|a| a / &g).collect(),
                constant: &t.constant / &g,
            },
        )
    };
    // Reduce entries into [0, m).
    for a in t.coeffs.iter_mut() {
        *a = a.mod_floor(&m);
    }
    t.constant = t.constant.mod_floor(&m);
    if negated {
        QAtom::NotDiv(m, t)
    } else {
        QAtom::Div(m, t)
    }
}

/// Negation-normal quantifier-free formula over `QAtom`s.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Qf {
    Top,
    Bot,
    Atom(QAtom),
    And(Vec<Qf>),
    Or(Vec<Qf>),
}

impl Qf {
    pub fn negate(&self) -> Qf {
        match self {
            Qf::Top => Qf::Bot,
            Qf::Bot => Qf::Top,
            Qf::Atom(a) => Qf::Atom(a.negate()),
            Qf::And(fs) => Qf::Or(fs.iter().map(Qf::negate).collect()),
            Qf::Or(fs) => Qf::And(fs.iter().map(Qf::negate).collect()),
        }
    }

    pub fn eval(&self, point: &[Int]) -> bool {
        match self {
            Qf::Top => true,
            Qf::Bot => false,
            Qf::Atom(a) => a.eval(point),
            Qf::And(fs) => fs.iter().all(|f| f.eval(point)),
            Qf::Or(fs) => fs.iter().any(|f| f.eval(point)),
        }
    }

    /// Flatten, fold ground atoms, sort and deduplicate children.
    pub fn simplify(self) -> Qf {
        match self {
            Qf::Top | Qf::Bot => self,
            Qf::Atom(a) => {
                let a = a.normalize();
                match a.ground_value() {
                    Some(true) => Qf::Top,
                    Some(false) => Qf::Bot,
                    None => Qf::Atom(a),
                }
            }
            Qf::And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.simplify() {
                        Qf::Top => {}
                        Qf::Bot => return Qf::Bot,
                        Qf::And(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                out.sort();
                out.dedup();
                match out.len() {
                    0 => Qf::Top,
                    1 => out.pop().unwrap(),
                    _ => Qf::And(out),
                }
            }
            Qf::Or(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.simplify() {
                        Qf::Bot => {}
                        Qf::Top => return Qf::Top,
                        Qf::Or(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                out.sort();
                out.dedup();
                match out.len() {
                    0 => Qf::Bot,
                    1 => out.pop().unwrap(),
                    _ => Qf::Or(out),
                }
            }
        }
    }
}

/// Linearize an Ord-sort term over the column universe. Bound variables map
/// through `binder_cols` (innermost last).
pub(crate) fn linearize_term(
    t: &Term,
    ncols: usize,
    binder_cols: &[usize],
) -> Result<LinTerm, PresburgerError> {
    match t {
        Term::FreeVar(Sort::Ord, k) => {
            if *k >= ncols {
                return Err(PresburgerError::NotPresburger(format!(
                    "Ord variable i{} outside the declared arity",
                    k + 1
                )));
            }
            Ok(LinTerm::var(ncols, *k))
        }
        Term::FreeVar(s, k) => Err(PresburgerError::NotPresburger(format!(
            "{:?}-sort variable {}{}",
            s,
            s.var_prefix(),
            k + 1
        ))),
        Term::BoundVar(d) => binder_cols
            .iter()
            .rev()
            .nth(*d)
            .map(|&c| LinTerm::var(ncols, c))
            .ok_or_else(|| {
                PresburgerError::NotPresburger("unbound variable".to_string())
            }),
        Term::OrdConst(c) => Ok(LinTerm::constant(ncols, c.clone())),
        Term::Add(a, b) => Ok(linearize_term(a, ncols, binder_cols)?
            .add(&linearize_term(b, ncols, binder_cols)?)),
        Term::Sub(a, b) => Ok(linearize_term(a, ncols, binder_cols)?
            .sub(&linearize_term(b, ncols, binder_cols)?)),
        Term::Neg(a) => Ok(linearize_term(a, ncols, binder_cols)?.neg()),
        Term::Mul(a, b) => {
            let la = linearize_term(a, ncols, binder_cols)?;
            let lb = linearize_term(b, ncols, binder_cols)?;
            if la.is_ground() {
                Ok(lb.scale(&la.constant))
            } else if lb.is_ground() {
                Ok(la.scale(&lb.constant))
            } else {
                Err(PresburgerError::Nonlinear(crate::formula::print_term(t)))
            }
        }
        Term::ValConst(_) | Term::ResConst(_) | Term::Ord(_) | Term::Ac(_) => {
            Err(PresburgerError::NotPresburger(format!(
                "non-Ord content `{}`",
                crate::formula::print_term(t)
            )))
        }
    }
}

/// Convert a formula (quantifiers handled by the caller) to `Qf` in
/// negation-normal form. `positive` is the current polarity.
pub(crate) fn formula_to_qf(
    f: &Formula,
    ncols: usize,
    binder_cols: &[usize],
    positive: bool,
) -> Result<Qf, PresburgerError> {
    Ok(match f {
        Formula::True => {
            if positive {
                Qf::Top
            } else {
                Qf::Bot
            }
        }
        Formula::False => {
            if positive {
                Qf::Bot
            } else {
                Qf::Top
            }
        }
        Formula::Atom(atom) => {
            let qatom = match atom {
                Atom::Eq(a, b) => {
                    let t = linearize_term(a, ncols, binder_cols)?
                        .sub(&linearize_term(b, ncols, binder_cols)?);
                    if positive {
                        QAtom::Eq(t)
                    } else {
                        QAtom::Ne(t)
                    }
                }
                Atom::Le(a, b) => {
                    let t = linearize_term(a, ncols, binder_cols)?
                        .sub(&linearize_term(b, ncols, binder_cols)?);
                    if positive {
                        QAtom::Le(t)
                    } else {
                        // not (a <= b)  <=>  b + 1 <= a
                        QAtom::Le(t.neg().add_const(&Int::one()))
                    }
                }
                Atom::Cong { modulus, lhs, rhs } => {
                    let t = linearize_term(lhs, ncols, binder_cols)?
                        .sub(&linearize_term(rhs, ncols, binder_cols)?);
                    let m = Int::from(*modulus);
                    if positive {
                        QAtom::Div(m, t)
                    } else {
                        QAtom::NotDiv(m, t)
                    }
                }
            };
            Qf::Atom(qatom)
        }
        Formula::Not(g) => formula_to_qf(g, ncols, binder_cols, !positive)?,
        Formula::And(a, b) => {
            let fa = formula_to_qf(a, ncols, binder_cols, positive)?;
            let fb = formula_to_qf(b, ncols, binder_cols, positive)?;
            if positive {
                Qf::And(vec![fa, fb])
            } else {
                Qf::Or(vec![fa, fb])
            }
        }
        Formula::Or(a, b) => {
            let fa = formula_to_qf(a, ncols, binder_cols, positive)?;
            let fb = formula_to_qf(b, ncols, binder_cols, positive)?;
            if positive {
                Qf::Or(vec![fa, fb])
            } else {
                Qf::And(vec![fa, fb])
            }
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            return Err(PresburgerError::NotPresburger(
                "unexpected quantifier in quantifier-free conversion".to_string(),
            ))
        }
    })
}

// ---- conversion back to the surface AST ----

/// Rebuild `sum a_k v_k (a_k > 0) + c (c > 0)` as a surface term; `0` when
/// empty.
fn side_term(entries: &[(usize, Int)], constant: &Int) -> Term {
    let mut parts: Vec<Term> = entries
        .iter()
        .map(|(col, a)| {
            let v = Term::FreeVar(Sort::Ord, *col);
            if a.is_one() {
                v
            } else {
                Term::mul(Term::OrdConst(a.clone()), v)
            }
        })
        .collect();
    if constant.is_positive() {
        parts.push(Term::OrdConst(constant.clone()));
    }
    match parts.len() {
        0 => Term::OrdConst(Int::zero()),
        _ => {
            let mut it = parts.into_iter();
            let first = it.next().unwrap();
            it.fold(first, Term::add)
        }
    }
}

fn split_sides(t: &LinTerm) -> (Term, Term) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (col, a) in t.coeffs.iter().enumerate() {
        if a.is_positive() {
            pos.push((col, a.clone()));
        } else if a.is_negative() {
            neg.push((col, -a.clone()));
        }
    }
    let (cpos, cneg) = if t.constant.is_positive() {
        (t.constant.clone(), Int::zero())
    } else {
        (Int::zero(), -t.constant.clone())
    };
    (side_term(&pos, &cpos), side_term(&neg, &cneg))
}

fn atom_to_formula(a: &QAtom) -> Formula {
    match a {
        QAtom::Le(t) => {
            let (lhs, rhs) = split_sides(t);
            Formula::le(lhs, rhs)
        }
        QAtom::Eq(t) => {
            let (lhs, rhs) = split_sides(t);
            Formula::eq(lhs, rhs)
        }
        QAtom::Ne(t) => {
            let (lhs, rhs) = split_sides(t);
            Formula::not(Formula::eq(lhs, rhs))
        }
        QAtom::Div(m, t) | QAtom::NotDiv(m, t) => {
            // Entries already reduced into [0, m) by normalize().
            let entries: Vec<(usize, Int)> = t
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(c, a)| (c, a.clone()))
                .collect();
            let lhs = side_term(&entries, &Int::zero());
            let rhs = Term::OrdConst((-t.constant.clone()).mod_floor(m));
            let modulus: u64 = m.try_into().expect("modulus fits u64");
            let cong = Formula::cong(modulus, lhs, rhs);
            if matches!(a, QAtom::Div(..)) {
                cong
            } else {
                Formula::not(cong)
            }
        }
    }
}

pub(crate) fn qf_to_formula(f: &Qf) -> Formula {
    match f {
        Qf::Top => Formula::True,
        Qf::Bot => Formula::False,
        Qf::Atom(a) => atom_to_formula(a),
        Qf::And(fs) => Formula::and_all(fs.iter().map(qf_to_formula)),
        Qf::Or(fs) => Formula::or_all(fs.iter().map(qf_to_formula)),
    }
}

pub(crate) fn count_quantifiers(f: &Formula) -> usize {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => 0,
        Formula::Not(g) => count_quantifiers(g),
        Formula::And(a, b) | Formula::Or(a, b) => {
            count_quantifiers(a) + count_quantifiers(b)
        }
        Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + count_quantifiers(g),
    }
}
