//! Typed first-order formulas over the three-sorted Denef-Pas language.
//!
//! Sorts: `Val` (Laurent series field), `Res` (residue field), `Ord` (value
//! group `Z`). Free variables are positional: `x1..xm` of sort Val,
//! `u1..un` of sort Res, `i1..ir` of sort Ord, mirroring the ambient spaces
//! `h[m,n,r]`. Bound variables are de Bruijn indices carrying a display
//! name, so alpha-equivalent formulas with the same names are structurally
//! equal.
//!
//! Val constants are Laurent polynomials in `t` over the rationals, Res
//! constants are rationals, Ord constants are integers. `ord` maps Val
//! terms to Ord (with `ord 0 = +infinity`), `ac` maps Val terms to Res
//! (with `ac 0 = 0`).

mod eval;
mod parser;
mod printer;
mod subst;

pub use eval::{evaluate_qf, evaluate_term, EvalError, ExtInt, Value};
pub use parser::{parse_formula, parse_term};
pub use printer::{print_formula, print_term};
pub use subst::{substitute, substitute_term, SubstMap};

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::poly::Laurent;
use crate::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Val,
    Res,
    Ord,
}

impl Sort {
    pub fn letter(self) -> char {
        match self {
            Sort::Val => 'V',
            Sort::Res => 'R',
            Sort::Ord => 'Z',
        }
    }

    /// Surface prefix of free variables of this sort.
    pub fn var_prefix(self) -> char {
        match self {
            Sort::Val => 'x',
            Sort::Res => 'u',
            Sort::Ord => 'i',
        }
    }
}

/// Free-variable counts `(m, n, r)` per sort; the ambient space `h[m,n,r]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    pub val: usize,
    pub res: usize,
    pub ord: usize,
}

impl Context {
    pub const EMPTY: Context = Context { val: 0, res: 0, ord: 0 };

    pub fn new(val: usize, res: usize, ord: usize) -> Self {
        Context { val, res, ord }
    }

    pub fn count(&self, sort: Sort) -> usize {
        match sort {
            Sort::Val => self.val,
            Sort::Res => self.res,
            Sort::Ord => self.ord,
        }
    }

    pub fn join(&self, other: &Context) -> Context {
        Context {
            val: self.val.max(other.val),
            res: self.res.max(other.res),
            ord: self.ord.max(other.ord),
        }
    }

    pub fn covers(&self, other: &Context) -> bool {
        self.val >= other.val && self.res >= other.res && self.ord >= other.ord
    }
}

impl core::fmt::Display for Context {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({}, {}, {})", self.val, self.res, self.ord)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Positional free variable (0-based; `x1` is `FreeVar(Val, 0)`).
    FreeVar(Sort, usize),
    /// De Bruijn index into enclosing binders (0 = innermost).
    BoundVar(usize),
    ValConst(Laurent<Rat>),
    ResConst(Rat),
    OrdConst(Int),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// Valuation of a Val term; sort Ord.
    Ord(Box<Term>),
    /// Angular component of a Val term; sort Res.
    Ac(Box<Term>),
}

impl Term {
    pub fn ord_const(v: i64) -> Term {
        Term::OrdConst(Int::from(v))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn ord_of(a: Term) -> Term {
        Term::Ord(Box::new(a))
    }

    pub fn ac_of(a: Term) -> Term {
        Term::Ac(Box::new(a))
    }

    /// True when the term contains no variables (free or bound).
    pub fn is_ground(&self) -> bool {
        match self {
            Term::FreeVar(..) | Term::BoundVar(_) => false,
            Term::ValConst(_) | Term::ResConst(_) | Term::OrdConst(_) => true,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.is_ground() && b.is_ground()
            }
            Term::Neg(a) | Term::Ord(a) | Term::Ac(a) => a.is_ground(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binder {
    pub name: String,
    pub sort: Sort,
}

impl Binder {
    pub fn new(name: &str, sort: Sort) -> Self {
        Binder { name: String::from(name), sort }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Equality within one sort.
    Eq(Term, Term),
    /// `a <= b` on the Ord sort.
    Le(Term, Term),
    /// `lhs = rhs mod modulus` on the Ord sort; modulus > 1.
    Cong { modulus: u64, lhs: Term, rhs: Term },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Binder, Box<Formula>),
    Forall(Binder, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(b: Binder, f: Formula) -> Formula {
        Formula::Exists(b, Box::new(f))
    }

    pub fn forall(b: Binder, f: Formula) -> Formula {
        Formula::Forall(b, Box::new(f))
    }

    pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Eq(a, b))
    }

    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Le(a, b))
    }

    pub fn cong(modulus: u64, lhs: Term, rhs: Term) -> Formula {
        Formula::Atom(Atom::Cong { modulus, lhs, rhs })
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => false,
            Formula::Not(f) => f.has_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.has_quantifier() || b.has_quantifier()
            }
            Formula::Exists(..) | Formula::Forall(..) => true,
        }
    }
}

/// Sort or well-formedness violation; carries the offending subterm printed
/// in the surface syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortError {
    pub msg: String,
    pub subterm: String,
}

impl SortError {
    fn new(msg: String, offender: &Term) -> Self {
        SortError { msg, subterm: print_term(offender) }
    }
}

impl core::fmt::Display for SortError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "sort error: {} (in `{}`)", self.msg, self.subterm)
    }
}

fn is_constant_int(t: &Term) -> bool {
    matches!(t, Term::OrdConst(_)) || matches!(t, Term::Neg(inner) if is_constant_int(inner))
}

/// Fold operations whose operands are constants of one sort, so maximal
/// constant subterms are single constant nodes.
pub(crate) fn fold_term(t: Term) -> Term {
    match t {
        Term::Add(a, b) => match (*a, *b) {
            (Term::ValConst(x), Term::ValConst(y)) => Term::ValConst(x.add(&y)),
            (Term::ResConst(x), Term::ResConst(y)) => Term::ResConst(x + y),
            (Term::OrdConst(x), Term::OrdConst(y)) => Term::OrdConst(x + y),
            (a, b) => Term::add(a, b),
        },
        Term::Sub(a, b) => match (*a, *b) {
            (Term::ValConst(x), Term::ValConst(y)) => Term::ValConst(x.sub(&y)),
            (Term::ResConst(x), Term::ResConst(y)) => Term::ResConst(x - y),
            (Term::OrdConst(x), Term::OrdConst(y)) => Term::OrdConst(x - y),
            (a, b) => Term::sub(a, b),
        },
        Term::Mul(a, b) => match (*a, *b) {
            (Term::ValConst(x), Term::ValConst(y)) => Term::ValConst(x.mul(&y)),
            (Term::ResConst(x), Term::ResConst(y)) => Term::ResConst(x * y),
            (Term::OrdConst(x), Term::OrdConst(y)) => Term::OrdConst(x * y),
            (a, b) => Term::mul(a, b),
        },
        Term::Neg(a) => match *a {
            Term::ValConst(x) => Term::ValConst(x.neg()),
            Term::ResConst(x) => Term::ResConst(-x),
            Term::OrdConst(x) => Term::OrdConst(-x),
            a => Term::neg(a),
        },
        other => other,
    }
}

/// Sort of a term under a stack of binders (innermost last).
pub fn term_sort(t: &Term, binders: &[Binder]) -> Result<Sort, SortError> {
    match t {
        Term::FreeVar(s, _) => Ok(*s),
        Term::BoundVar(k) => binders
            .iter()
            .rev()
            .nth(*k)
            .map(|b| b.sort)
            .ok_or_else(|| SortError::new(format!("unbound de Bruijn index {k}"), t)),
        Term::ValConst(_) => Ok(Sort::Val),
        Term::ResConst(_) => Ok(Sort::Res),
        Term::OrdConst(_) => Ok(Sort::Ord),
        Term::Add(a, b) | Term::Sub(a, b) => {
            let sa = term_sort(a, binders)?;
            let sb = term_sort(b, binders)?;
            if sa != sb {
                return Err(SortError::new(
                    format!("mixed sorts {sa:?} and {sb:?} in ring operation"),
                    t,
                ));
            }
            Ok(sa)
        }
        Term::Mul(a, b) => {
            let sa = term_sort(a, binders)?;
            let sb = term_sort(b, binders)?;
            if sa != sb {
                return Err(SortError::new(
                    format!("mixed sorts {sa:?} and {sb:?} in ring operation"),
                    t,
                ));
            }
            if sa == Sort::Ord && !is_constant_int(a) && !is_constant_int(b) {
                return Err(SortError::new(
                    String::from("Ord multiplication needs a constant factor"),
                    t,
                ));
            }
            Ok(sa)
        }
        Term::Neg(a) => term_sort(a, binders),
        Term::Ord(a) => {
            let sa = term_sort(a, binders)?;
            if sa != Sort::Val {
                return Err(SortError::new(
                    format!("ord applied to a {sa:?} term"),
                    a,
                ));
            }
            Ok(Sort::Ord)
        }
        Term::Ac(a) => {
            let sa = term_sort(a, binders)?;
            if sa != Sort::Val {
                return Err(SortError::new(format!("ac applied to a {sa:?} term"), a));
            }
            Ok(Sort::Res)
        }
    }
}

fn check_formula_rec(f: &Formula, binders: &mut Vec<Binder>) -> Result<(), SortError> {
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Atom(Atom::Eq(a, b)) => {
            let sa = term_sort(a, binders)?;
            let sb = term_sort(b, binders)?;
            if sa != sb {
                return Err(SortError::new(
                    format!("equality between sorts {sa:?} and {sb:?}"),
                    b,
                ));
            }
            Ok(())
        }
        Formula::Atom(Atom::Le(a, b)) => {
            for t in [a, b] {
                let s = term_sort(t, binders)?;
                if s != Sort::Ord {
                    return Err(SortError::new(
                        format!("order comparison on a {s:?} term"),
                        t,
                    ));
                }
            }
            Ok(())
        }
        Formula::Atom(Atom::Cong { modulus, lhs, rhs }) => {
            if *modulus < 2 {
                return Err(SortError::new(
                    format!("congruence modulus {modulus} must exceed 1"),
                    lhs,
                ));
            }
            for t in [lhs, rhs] {
                let s = term_sort(t, binders)?;
                if s != Sort::Ord {
                    return Err(SortError::new(
                        format!("congruence on a {s:?} term"),
                        t,
                    ));
                }
            }
            Ok(())
        }
        Formula::Not(g) => check_formula_rec(g, binders),
        Formula::And(a, b) | Formula::Or(a, b) => {
            check_formula_rec(a, binders)?;
            check_formula_rec(b, binders)
        }
        Formula::Exists(b, g) | Formula::Forall(b, g) => {
            binders.push(b.clone());
            let r = check_formula_rec(g, binders);
            binders.pop();
            r
        }
    }
}

/// Validates sorts, binder indices, and congruence moduli.
pub fn check_formula(f: &Formula) -> Result<(), SortError> {
    check_formula_rec(f, &mut Vec::new())
}

fn term_context(t: &Term, ctx: &mut Context) {
    match t {
        Term::FreeVar(s, k) => match s {
            Sort::Val => ctx.val = ctx.val.max(k + 1),
            Sort::Res => ctx.res = ctx.res.max(k + 1),
            Sort::Ord => ctx.ord = ctx.ord.max(k + 1),
        },
        Term::BoundVar(_) | Term::ValConst(_) | Term::ResConst(_) | Term::OrdConst(_) => {}
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            term_context(a, ctx);
            term_context(b, ctx);
        }
        Term::Neg(a) | Term::Ord(a) | Term::Ac(a) => term_context(a, ctx),
    }
}

/// Minimal context covering the free variables of a term.
pub fn free_context_term(t: &Term) -> Context {
    let mut ctx = Context::EMPTY;
    term_context(t, &mut ctx);
    ctx
}

/// Minimal context `(m, n, r)` covering the free variables of a formula.
pub fn free_context(f: &Formula) -> Context {
    fn rec(f: &Formula, ctx: &mut Context) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(Atom::Eq(a, b)) | Formula::Atom(Atom::Le(a, b)) => {
                term_context(a, ctx);
                term_context(b, ctx);
            }
            Formula::Atom(Atom::Cong { lhs, rhs, .. }) => {
                term_context(lhs, ctx);
                term_context(rhs, ctx);
            }
            Formula::Not(g) => rec(g, ctx),
            Formula::And(a, b) | Formula::Or(a, b) => {
                rec(a, ctx);
                rec(b, ctx);
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) => rec(g, ctx),
        }
    }
    let mut ctx = Context::EMPTY;
    rec(f, &mut ctx);
    ctx
}

/// A definable subassignment of `h[ctx]`: a formula with a declared ambient
/// context covering its free variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subassignment {
    pub formula: Formula,
    pub ctx: Context,
}

impl Subassignment {
    pub fn new(formula: Formula, ctx: Context) -> Result<Self, SortError> {
        check_formula(&formula)?;
        let min = free_context(&formula);
        if !ctx.covers(&min) {
            return Err(SortError {
                msg: format!("declared context {ctx} does not cover free variables {min}"),
                subterm: print_formula(&formula),
            });
        }
        Ok(Subassignment { formula, ctx })
    }

    /// Ambient space `h[ctx]` itself.
    pub fn ambient(ctx: Context) -> Self {
        Subassignment { formula: Formula::True, ctx }
    }

    /// The final object `h[0,0,0]`.
    pub fn point() -> Self {
        Subassignment::ambient(Context::EMPTY)
    }
}

/// A point of some `h[m,n,r]`: exact coordinates per sort. Val coordinates
/// are Laurent polynomials in `t` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub val: Vec<Laurent<Rat>>,
    pub res: Vec<Rat>,
    pub ord: Vec<Int>,
}

impl Point {
    pub fn new(val: Vec<Laurent<Rat>>, res: Vec<Rat>, ord: Vec<Int>) -> Self {
        Point { val, res, ord }
    }

    pub fn empty() -> Self {
        Point { val: Vec::new(), res: Vec::new(), ord: Vec::new() }
    }

    pub fn ord_point(coords: &[i64]) -> Self {
        Point {
            val: Vec::new(),
            res: Vec::new(),
            ord: coords.iter().map(|&c| Int::from(c)).collect(),
        }
    }

    pub fn context(&self) -> Context {
        Context::new(self.val.len(), self.res.len(), self.ord.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_inference() {
        let f = parse_formula("ord(x1) = i1 && ac(x1) = u1").unwrap();
        assert_eq!(free_context(&f), Context::new(1, 1, 1));

        let g = parse_formula("exists y:V (x1 = y*y)").unwrap();
        assert_eq!(free_context(&g), Context::new(1, 0, 0));

        let closed = parse_formula("exists j:Z (j = 0)").unwrap();
        assert_eq!(free_context(&closed), Context::EMPTY);
    }

    #[test]
    fn conjunction_joins_contexts() {
        let a = parse_formula("ord(x1) = 0").unwrap();
        let b = parse_formula("i1 <= 3").unwrap();
        let c = Formula::and(a, b);
        assert_eq!(free_context(&c), Context::new(1, 0, 1));
    }

    #[test]
    fn sort_errors() {
        assert!(parse_formula("ord(u1) = 0").is_err());
        assert!(parse_formula("x1 = u1").is_err());
        assert!(parse_formula("i1 * i2 = 4").is_err());
        // Scalar multiples on Ord are fine.
        assert!(parse_formula("2 * i1 = 4").is_err() == false);
    }
}
