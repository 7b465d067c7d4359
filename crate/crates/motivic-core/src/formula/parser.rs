//! Parser for the surface syntax of formulas and terms.
//!
//! Grammar sketch (see the README for the full table):
//!
//! ```text
//! formula := disj
//! disj    := conj ("||" conj)*
//! conj    := unit ("&&" unit)*
//! unit    := "!" unit | quant | "true" | "false" | atom | "(" formula ")"
//! quant   := ("exists" | "forall") NAME ":" ("V"|"R"|"Z") unit
//! atom    := term REL term | "mod" "(" term "," INT ")" "=" term
//! REL     := "=" | "!=" | "<=" | ">=" | "<" | ">"
//! term    := factor (("+"|"-") factor)*
//! factor  := unary ("*" unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" SIGNED_INT)?
//! primary := VAR | INT ("/" INT)? | "t" | "ord" "(" term ")"
//!          | "ac" "(" term ")" | "(" term ")"
//! ```
//!
//! Free variables are `x<k>` (Val), `u<k>` (Res), `i<k>` (Ord) with `k >= 1`;
//! binder names must not collide with that pattern. Maximal constant
//! subterms fold into single constants, so `3*t + t^2` is one Val constant.
//! Numeric literals take their sort from context, defaulting to Ord, then
//! Res. `<` and `>=` style comparisons desugar to `<=` atoms over the
//! integers; `a != b` desugars to `!(a = b)`.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::poly::Laurent;
use crate::{Int, Rat};

use super::{check_formula, Atom, Binder, Formula, Sort, SortError, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { pos: usize, msg: String },
    Sort(SortError),
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ParseError::Syntax { pos, msg } => {
                write!(f, "syntax error at offset {pos}: {msg}")
            }
            ParseError::Sort(e) => write!(f, "{e}"),
        }
    }
}

impl From<SortError> for ParseError {
    fn from(e: SortError) -> Self {
        ParseError::Sort(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(Int),
    LPar,
    RPar,
    Comma,
    Colon,
    AndAnd,
    OrOr,
    Bang,
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '(' => {
                toks.push((Tok::LPar, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RPar, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, start));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, start));
                i += 1;
            }
            '&' => {
                if bytes.get(i + 1) == Some(&b'&') {
                    toks.push((Tok::AndAnd, start));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        pos: start,
                        msg: "expected `&&`".to_owned(),
                    });
                }
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    toks.push((Tok::OrOr, start));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        pos: start,
                        msg: "expected `||`".to_owned(),
                    });
                }
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Ne, start));
                    i += 2;
                } else {
                    toks.push((Tok::Bang, start));
                    i += 1;
                }
            }
            '=' => {
                toks.push((Tok::Eq, start));
                i += 1;
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Le, start));
                    i += 2;
                } else {
                    toks.push((Tok::Lt, start));
                    i += 1;
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Ge, start));
                    i += 2;
                } else {
                    toks.push((Tok::Gt, start));
                    i += 1;
                }
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: Int = src[i..j].parse().expect("digit run");
                toks.push((Tok::Num(n), start));
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                toks.push((Tok::Ident(src[i..j].to_owned()), start));
                i = j;
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    let end = src.len();
    Ok(Lexer { toks, at: 0, end })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                msg: format!("expected {what}"),
            })
        }
    }
}

/// Untyped term tree produced by the grammar, before sort resolution.
#[derive(Clone, Debug)]
enum Raw {
    Var(String, usize),
    Num(Int),
    RatLit(Rat),
    T,
    Add(Box<Raw>, Box<Raw>),
    Sub(Box<Raw>, Box<Raw>),
    Mul(Box<Raw>, Box<Raw>),
    Neg(Box<Raw>),
    Pow(Box<Raw>, i64, usize),
    Ord(Box<Raw>),
    Ac(Box<Raw>),
}

const KEYWORDS: &[&str] = &[
    "exists", "forall", "mod", "ord", "ac", "t", "true", "false",
];

/// Free-variable pattern: `x<digits>`, `u<digits>`, `i<digits>`.
fn free_var_of(name: &str) -> Option<(Sort, usize)> {
    let mut chars = name.chars();
    let head = chars.next()?;
    let sort = match head {
        'x' => Sort::Val,
        'u' => Sort::Res,
        'i' => Sort::Ord,
        _ => return None,
    };
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let idx: usize = rest.parse().ok()?;
    if idx == 0 {
        return None;
    }
    Some((sort, idx - 1))
}

struct Parser<'a> {
    lx: Lexer,
    binders: Vec<Binder>,
    src: &'a str,
}

/// Bitmask of candidate sorts during inference.
#[derive(Clone, Copy, PartialEq, Eq)]
struct SortSet(u8);

impl SortSet {
    const VAL: u8 = 1;
    const RES: u8 = 2;
    const ORD: u8 = 4;

    fn only(s: Sort) -> Self {
        SortSet(match s {
            Sort::Val => Self::VAL,
            Sort::Res => Self::RES,
            Sort::Ord => Self::ORD,
        })
    }

    fn all() -> Self {
        SortSet(Self::VAL | Self::RES | Self::ORD)
    }

    fn field() -> Self {
        SortSet(Self::VAL | Self::RES)
    }

    fn inter(self, other: Self) -> Self {
        SortSet(self.0 & other.0)
    }

    fn is_empty(self) -> bool {
        self.0 == 0
    }

    fn contains(self, s: Sort) -> bool {
        !self.inter(SortSet::only(s)).is_empty()
    }

    /// Resolution default: Ord, then Res, then Val.
    fn pick(self) -> Option<Sort> {
        if self.contains(Sort::Ord) {
            Some(Sort::Ord)
        } else if self.contains(Sort::Res) {
            Some(Sort::Res)
        } else if self.contains(Sort::Val) {
            Some(Sort::Val)
        } else {
            None
        }
    }
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.lx.pos(),
            msg: msg.into(),
        })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while self.lx.eat(&Tok::OrOr) {
            let g = self.conj()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unit()?;
        while self.lx.eat(&Tok::AndAnd) {
            let g = self.unit()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        if self.lx.eat(&Tok::Bang) {
            let f = self.unit()?;
            return Ok(Formula::not(f));
        }
        match self.lx.peek() {
            Some(Tok::Ident(name)) if name == "exists" || name == "forall" => {
                let universal = name == "forall";
                self.lx.next();
                let bname = match self.lx.next() {
                    Some(Tok::Ident(n)) => n,
                    _ => return self.err("expected binder name"),
                };
                if KEYWORDS.contains(&bname.as_str()) {
                    return self.err(format!("`{bname}` cannot be a binder name"));
                }
                if free_var_of(&bname).is_some() {
                    return self.err(format!(
                        "binder name `{bname}` collides with the free-variable pattern"
                    ));
                }
                self.lx.expect(Tok::Colon, "`:` after binder name")?;
                let sort = match self.lx.next() {
                    Some(Tok::Ident(s)) if s == "V" => Sort::Val,
                    Some(Tok::Ident(s)) if s == "R" => Sort::Res,
                    Some(Tok::Ident(s)) if s == "Z" => Sort::Ord,
                    _ => return self.err("expected sort letter V, R, or Z"),
                };
                let binder = Binder::new(&bname, sort);
                self.binders.push(binder.clone());
                let body = self.unit();
                self.binders.pop();
                let body = body?;
                return Ok(if universal {
                    Formula::forall(binder, body)
                } else {
                    Formula::exists(binder, body)
                });
            }
            Some(Tok::Ident(name)) if name == "true" => {
                self.lx.next();
                return Ok(Formula::True);
            }
            Some(Tok::Ident(name)) if name == "false" => {
                self.lx.next();
                return Ok(Formula::False);
            }
            Some(Tok::Ident(name)) if name == "mod" => {
                return self.cong_atom();
            }
            _ => {}
        }
        // `(` may open a parenthesized formula or a parenthesized term; try
        // the formula reading first and backtrack on failure.
        if self.lx.peek() == Some(&Tok::LPar) {
            let save = self.lx.at;
            self.lx.next();
            if let Ok(f) = self.formula() {
                if self.lx.eat(&Tok::RPar)
                    && !matches!(
                        self.lx.peek(),
                        Some(
                            Tok::Eq
                                | Tok::Ne
                                | Tok::Le
                                | Tok::Ge
                                | Tok::Lt
                                | Tok::Gt
                                | Tok::Plus
                                | Tok::Minus
                                | Tok::Star
                                | Tok::Caret
                                | Tok::Slash
                        )
                    )
                {
                    return Ok(f);
                }
            }
            self.lx.at = save;
        }
        self.rel_atom()
    }

    fn cong_atom(&mut self) -> Result<Formula, ParseError> {
        self.lx.next(); // mod
        self.lx.expect(Tok::LPar, "`(` after mod")?;
        let lhs = self.term()?;
        self.lx.expect(Tok::Comma, "`,` in mod(t, n)")?;
        let n = match self.lx.next() {
            Some(Tok::Num(n)) => n,
            _ => return self.err("expected integer modulus"),
        };
        self.lx.expect(Tok::RPar, "`)` after modulus")?;
        self.lx.expect(Tok::Eq, "`=` after mod(t, n)")?;
        let rhs = self.term()?;
        let modulus: u64 = match n.try_into() {
            Ok(m) if m > 1 => m,
            _ => return self.err("congruence modulus must exceed 1"),
        };
        let lhs = self.resolve(&lhs, Some(Sort::Ord))?;
        let rhs = self.resolve(&rhs, Some(Sort::Ord))?;
        Ok(Formula::cong(modulus, lhs, rhs))
    }

    fn rel_atom(&mut self) -> Result<Formula, ParseError> {
        let a = self.term()?;
        let rel = match self.lx.next() {
            Some(t @ (Tok::Eq | Tok::Ne | Tok::Le | Tok::Ge | Tok::Lt | Tok::Gt)) => t,
            _ => return self.err("expected a relation (=, !=, <=, >=, <, >)"),
        };
        let b = self.term()?;
        match rel {
            Tok::Eq | Tok::Ne => {
                let sa = self.possible(&a)?;
                let sb = self.possible(&b)?;
                let s = match sa.inter(sb).pick() {
                    Some(s) => s,
                    None => {
                        return Err(SortError {
                            msg: "equality between incompatible sorts".to_owned(),
                            subterm: self.src.to_owned(),
                        }
                        .into())
                    }
                };
                let ta = self.resolve(&a, Some(s))?;
                let tb = self.resolve(&b, Some(s))?;
                let eq = Formula::eq(ta, tb);
                Ok(if rel == Tok::Ne { Formula::not(eq) } else { eq })
            }
            _ => {
                let ta = self.resolve(&a, Some(Sort::Ord))?;
                let tb = self.resolve(&b, Some(Sort::Ord))?;
                let one = Term::ord_const(1);
                Ok(match rel {
                    Tok::Le => Formula::le(ta, tb),
                    Tok::Ge => Formula::le(tb, ta),
                    Tok::Lt => Formula::le(Term::add(ta, one), tb),
                    Tok::Gt => Formula::le(Term::add(tb, one), ta),
                    _ => unreachable!(),
                })
            }
        }
    }

    // ---- raw term grammar ----

    fn term(&mut self) -> Result<Raw, ParseError> {
        let mut a = self.factor()?;
        loop {
            if self.lx.eat(&Tok::Plus) {
                let b = self.factor()?;
                a = Raw::Add(Box::new(a), Box::new(b));
            } else if self.lx.eat(&Tok::Minus) {
                let b = self.factor()?;
                a = Raw::Sub(Box::new(a), Box::new(b));
            } else {
                return Ok(a);
            }
        }
    }

    fn factor(&mut self) -> Result<Raw, ParseError> {
        let mut a = self.unary()?;
        while self.lx.eat(&Tok::Star) {
            let b = self.unary()?;
            a = Raw::Mul(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        if self.lx.eat(&Tok::Minus) {
            let a = self.unary()?;
            return Ok(Raw::Neg(Box::new(a)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Raw, ParseError> {
        let base = self.primary()?;
        if self.lx.eat(&Tok::Caret) {
            let pos = self.lx.pos();
            let neg = self.lx.eat(&Tok::Minus);
            let e = match self.lx.next() {
                Some(Tok::Num(n)) => n,
                _ => return self.err("expected integer exponent"),
            };
            let e: i64 = match e.try_into() {
                Ok(v) => v,
                Err(_) => return self.err("exponent out of range"),
            };
            let e = if neg { -e } else { e };
            return Ok(Raw::Pow(Box::new(base), e, pos));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Raw, ParseError> {
        let pos = self.lx.pos();
        match self.lx.next() {
            Some(Tok::LPar) => {
                let t = self.term()?;
                self.lx.expect(Tok::RPar, "`)`")?;
                Ok(t)
            }
            Some(Tok::Num(n)) => {
                // A slash after an integer literal forms a rational literal.
                if self.lx.peek() == Some(&Tok::Slash) {
                    self.lx.next();
                    match self.lx.next() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            Ok(Raw::RatLit(Rat::new(n, d)))
                        }
                        _ => self.err("expected nonzero denominator"),
                    }
                } else {
                    Ok(Raw::Num(n))
                }
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "t" => Ok(Raw::T),
                "ord" => {
                    self.lx.expect(Tok::LPar, "`(` after ord")?;
                    let t = self.term()?;
                    self.lx.expect(Tok::RPar, "`)`")?;
                    Ok(Raw::Ord(Box::new(t)))
                }
                "ac" => {
                    self.lx.expect(Tok::LPar, "`(` after ac")?;
                    let t = self.term()?;
                    self.lx.expect(Tok::RPar, "`)`")?;
                    Ok(Raw::Ac(Box::new(t)))
                }
                _ => Ok(Raw::Var(name, pos)),
            },
            _ => Err(ParseError::Syntax {
                pos,
                msg: "expected a term".to_owned(),
            }),
        }
    }

    // ---- sort inference ----

    fn var_sort(&self, name: &str, pos: usize) -> Result<Sort, ParseError> {
        for b in self.binders.iter().rev() {
            if b.name == name {
                return Ok(b.sort);
            }
        }
        if let Some((s, _)) = free_var_of(name) {
            return Ok(s);
        }
        Err(ParseError::Syntax {
            pos,
            msg: format!("unknown variable `{name}`"),
        })
    }

    fn possible(&self, raw: &Raw) -> Result<SortSet, ParseError> {
        Ok(match raw {
            Raw::Var(name, pos) => SortSet::only(self.var_sort(name, *pos)?),
            Raw::Num(_) => SortSet::all(),
            Raw::RatLit(_) => SortSet::field(),
            Raw::T => SortSet::only(Sort::Val),
            Raw::Add(a, b) | Raw::Sub(a, b) | Raw::Mul(a, b) => {
                self.possible(a)?.inter(self.possible(b)?)
            }
            Raw::Neg(a) => self.possible(a)?,
            Raw::Pow(a, e, _) => {
                let base = self.possible(a)?;
                if *e < 0 {
                    // Negative powers only make sense for Val constants.
                    base.inter(SortSet::only(Sort::Val))
                } else {
                    base
                }
            }
            Raw::Ord(_) => SortSet::only(Sort::Ord),
            Raw::Ac(_) => SortSet::only(Sort::Res),
        })
    }

    /// Resolve a raw tree at the given sort (or the default pick), folding
    /// maximal constant subtrees.
    fn resolve(&self, raw: &Raw, want: Option<Sort>) -> Result<Term, ParseError> {
        let set = self.possible(raw)?;
        let sort = match want {
            Some(s) => {
                if !set.contains(s) {
                    return Err(SortError {
                        msg: format!("term cannot have sort {s:?}"),
                        subterm: self.src.to_owned(),
                    }
                    .into());
                }
                s
            }
            None => set.pick().ok_or_else(|| ParseError::Sort(SortError {
                msg: "term has no consistent sort".to_owned(),
                subterm: self.src.to_owned(),
            }))?,
        };
        self.build(raw, sort)
    }

    fn build(&self, raw: &Raw, sort: Sort) -> Result<Term, ParseError> {
        let term = match raw {
            Raw::Var(name, _) => {
                for (depth, b) in self.binders.iter().rev().enumerate() {
                    if &b.name == name {
                        return Ok(Term::BoundVar(depth));
                    }
                }
                let (s, idx) = free_var_of(name).expect("checked in var_sort");
                Term::FreeVar(s, idx)
            }
            Raw::Num(n) => match sort {
                Sort::Ord => Term::OrdConst(n.clone()),
                Sort::Res => Term::ResConst(Rat::from_integer(n.clone())),
                Sort::Val => Term::ValConst(Laurent::constant(Rat::from_integer(n.clone()))),
            },
            Raw::RatLit(q) => match sort {
                Sort::Res => Term::ResConst(q.clone()),
                Sort::Val => Term::ValConst(Laurent::constant(q.clone())),
                Sort::Ord => {
                    return Err(SortError {
                        msg: "rational literal in the Ord sort".to_owned(),
                        subterm: self.src.to_owned(),
                    }
                    .into())
                }
            },
            Raw::T => Term::ValConst(Laurent::monomial(Rat::one(), 1)),
            Raw::Add(a, b) => fold(Term::add(self.build(a, sort)?, self.build(b, sort)?)),
            Raw::Sub(a, b) => fold(Term::sub(self.build(a, sort)?, self.build(b, sort)?)),
            Raw::Mul(a, b) => fold(Term::mul(self.build(a, sort)?, self.build(b, sort)?)),
            Raw::Neg(a) => fold(Term::neg(self.build(a, sort)?)),
            Raw::Pow(a, e, pos) => {
                let base = self.build(a, sort)?;
                match expand_pow(base, *e) {
                    Some(t) => fold(t),
                    None => {
                        return Err(ParseError::Syntax {
                            pos: *pos,
                            msg: "negative power of a non-monomial".to_owned(),
                        })
                    }
                }
            }
            Raw::Ord(a) => Term::ord_of(self.resolve(a, Some(Sort::Val))?),
            Raw::Ac(a) => Term::ac_of(self.resolve(a, Some(Sort::Val))?),
        };
        Ok(term)
    }
}

/// x^e; negative exponents only for Val monomials (e.g. t^-1, (3*t)^-2).
fn expand_pow(base: Term, e: i64) -> Option<Term> {
    if e >= 0 {
        if let Term::ValConst(ref l) = base {
            return Some(Term::ValConst(l.pow(e as u32)));
        }
        let mut acc: Option<Term> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => base.clone(),
                Some(t) => Term::mul(t, base.clone()),
            });
        }
        Some(match acc {
            None => match super::term_sort(&base, &[]) {
                Ok(Sort::Val) => Term::ValConst(Laurent::one()),
                Ok(Sort::Res) => Term::ResConst(Rat::one()),
                _ => Term::ord_const(1),
            },
            Some(t) => t,
        })
    } else {
        match base {
            Term::ValConst(l) => {
                let (deg, coeff) = {
                    let mut it = l.monomials();
                    let first = it.next()?;
                    if it.next().is_some() {
                        return None;
                    }
                    (first.0, first.1.clone())
                };
                let mut inv = Laurent::monomial(Rat::one() / coeff, -deg);
                let mut acc = Laurent::one();
                for _ in 0..(-e) {
                    acc = acc.mul(&inv);
                }
                inv = acc;
                Some(Term::ValConst(inv))
            }
            _ => None,
        }
    }
}

use super::fold_term as fold;

/// Parse a formula; infers sorts and validates well-formedness.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let lx = lex(src)?;
    let mut p = Parser { lx, binders: Vec::new(), src };
    let f = p.formula()?;
    if p.lx.peek().is_some() {
        return p.err("trailing input after formula");
    }
    check_formula(&f)?;
    Ok(f)
}

/// Parse a standalone term, optionally at a required sort.
pub fn parse_term(src: &str, want: Option<Sort>) -> Result<Term, ParseError> {
    let lx = lex(src)?;
    let mut p = Parser { lx, binders: Vec::new(), src };
    let raw = p.term()?;
    if p.lx.peek().is_some() {
        return p.err("trailing input after term");
    }
    p.resolve(&raw, want)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{free_context, Context};

    #[test]
    fn parses_readme_examples() {
        let f = parse_formula("ord(x1) = i1 && ac(x1) = u1").unwrap();
        assert_eq!(free_context(&f), Context::new(1, 1, 1));

        parse_formula("exists y:V (x1 = y*y)").unwrap();
        parse_formula("mod(i1, 2) = 0").unwrap();
        parse_formula("ord(x1 - 3*t + t^2 - (1/2)*t^-1) >= 2").unwrap();
        parse_formula("forall j:Z (j <= j + 1)").unwrap();
    }

    #[test]
    fn constant_folding() {
        let t = parse_term("3*t + t^2", Some(Sort::Val)).unwrap();
        assert!(matches!(t, Term::ValConst(_)));
        let t = parse_term("2 + 3", Some(Sort::Ord)).unwrap();
        assert_eq!(t, Term::ord_const(5));
    }

    #[test]
    fn desugaring() {
        let f = parse_formula("i1 < 3").unwrap();
        assert_eq!(
            f,
            Formula::le(
                Term::add(Term::FreeVar(Sort::Ord, 0), Term::ord_const(1)),
                Term::ord_const(3)
            )
        );
        let f = parse_formula("u1 != 0").unwrap();
        assert!(matches!(f, Formula::Not(_)));
    }

    #[test]
    fn rejects_sort_violations() {
        assert!(parse_formula("ord(u1) = 0").is_err());
        assert!(parse_formula("ac(i1) = 0").is_err());
        assert!(parse_formula("mod(u1, 2) = 0").is_err());
        assert!(parse_formula("exists x1:V (x1 = 0)").is_err());
        assert!(parse_formula("i1 <= u1").is_err());
    }

    #[test]
    fn shadowing_resolves_innermost() {
        let f = parse_formula("exists y:Z exists y:Z (y = 0)").unwrap();
        match f {
            Formula::Exists(_, inner) => match *inner {
                Formula::Exists(_, body) => match *body {
                    Formula::Atom(Atom::Eq(Term::BoundVar(0), _)) => {}
                    other => panic!("unexpected body {other:?}"),
                },
                other => panic!("unexpected inner {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }
}
