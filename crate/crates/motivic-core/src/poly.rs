//! Dense univariate and Laurent polynomials over an exact coefficient ring.
//!
//! `Poly<T>` stores coefficients in ascending degree order; the invariant is
//! that the last coefficient is nonzero (empty vector = zero polynomial).
//! `Laurent<T>` is a `Poly<T>` together with a (possibly negative) shift,
//! normalized so the polynomial part has nonzero constant term.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::{Int, Rat};

/// Coefficient bound: exact ring with equality.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    pub fn monomial(c: T, deg: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, deg: usize) -> T {
        self.coeffs.get(deg).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Lowest degree with nonzero coefficient, or None for zero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.clone().neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Shift the variable: p(x) -> p(x) * x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| f(c)).collect())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() - 1);
        let mut k = T::one();
        for c in &self.coeffs[1..] {
            coeffs.push(c.clone() * k.clone());
            k = k + T::one();
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Poly<Rat> {
    /// Euclidean division over the rationals: returns (quotient, remainder).
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quo = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap().clone() / lead.clone();
            quo[rd - dd] = c.clone();
            let sub = d.scale(&c).shift_up(rd - dd);
            rem = rem.sub(&sub);
        }
        (Poly::from_coeffs(quo), rem)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        // Normalize monic.
        if let Some(lc) = a.leading().cloned() {
            a = a.scale(&(Rat::one() / lc));
        }
        a
    }
}

impl Poly<Int> {
    /// Exact division; panics if the division has a remainder. Meant for
    /// divisors with unit leading coefficient.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem_int(d).expect("inexact polynomial division");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Division over Z when all intermediate coefficient divisions are exact;
    /// returns None otherwise.
    pub fn div_rem_int(&self, d: &Self) -> Option<(Self, Self)> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quo = vec![Int::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let top = rem.leading().unwrap().clone();
            use num_integer::Integer as _;
            let (c, cr) = top.div_rem(&lead);
            if !cr.is_zero() {
                return None;
            }
            quo[rd - dd] = c.clone();
            let sub = d.scale(&c).shift_up(rd - dd);
            rem = rem.sub(&sub);
        }
        Some((Poly::from_coeffs(quo), rem))
    }

    /// Divides out the integer content and normalizes the leading
    /// coefficient positive. Returns zero for zero.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer as _;
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.leading().unwrap() < &Int::zero() {
            g = -g;
        }
        Poly::from_coeffs(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn to_rat(&self) -> Poly<Rat> {
        self.map(|c| Rat::from_integer(c.clone()))
    }
}

/// Clear denominators of a rational polynomial; returns the primitive integer
/// polynomial with positive leading coefficient (content is dropped).
pub fn clear_denominators(p: &Poly<Rat>) -> Poly<Int> {
    use num_integer::Integer as _;
    if p.is_zero() {
        return Poly::zero();
    }
    let mut lcm = Int::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ip = Poly::from_coeffs(
        p.coeffs()
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect(),
    );
    ip.primitive()
}

/// Gcd over Z[x] up to units: rational gcd of the primitive parts, rescaled
/// primitive. Content is not tracked; callers treat the result as defined up
/// to sign.
pub fn gcd_int(a: &Poly<Int>, b: &Poly<Int>) -> Poly<Int> {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let g = a.to_rat().gcd(&b.to_rat());
    clear_denominators(&g)
}

/// Laurent polynomial: `poly * x^shift` with the polynomial part having a
/// nonzero constant term (zero is shift 0, zero poly).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent<T> {
    shift: i64,
    poly: Poly<T>,
}

impl<T: Coeff> Laurent<T> {
    pub fn zero() -> Self {
        Laurent {
            shift: 0,
            poly: Poly::zero(),
        }
    }

    pub fn one() -> Self {
        Laurent {
            shift: 0,
            poly: Poly::one(),
        }
    }

    pub fn constant(c: T) -> Self {
        Laurent {
            shift: 0,
            poly: Poly::constant(c),
        }
    }

    pub fn monomial(c: T, deg: i64) -> Self {
        if c.is_zero() {
            Laurent::zero()
        } else {
            Laurent {
                shift: deg,
                poly: Poly::constant(c),
            }
        }
    }

    pub fn from_poly(poly: Poly<T>, shift: i64) -> Self {
        match poly.order() {
            None => Laurent::zero(),
            Some(0) => Laurent { shift, poly },
            Some(k) => Laurent {
                shift: shift + k as i64,
                poly: Poly::from_coeffs(poly.coeffs()[k..].to_vec()),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Lowest exponent with nonzero coefficient (valuation), None for zero.
    pub fn order(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.shift)
        }
    }

    /// Highest exponent with nonzero coefficient, None for zero.
    pub fn top_degree(&self) -> Option<i64> {
        self.poly.degree().map(|d| self.shift + d as i64)
    }

    /// Coefficient of the lowest-order monomial; zero for the zero element.
    pub fn leading_low(&self) -> T {
        self.poly.coeff(0)
    }

    pub fn coeff(&self, deg: i64) -> T {
        let k = deg - self.shift;
        if k < 0 || self.is_zero() {
            T::zero()
        } else {
            self.poly.coeff(k as usize)
        }
    }

    /// Iterates `(exponent, coefficient)` over nonzero monomials, ascending.
    pub fn monomials(&self) -> impl Iterator<Item = (i64, &T)> {
        let shift = self.shift;
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (shift + k as i64, c))
    }

    pub fn poly_part(&self) -> &Poly<T> {
        &self.poly
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(other.shift);
        let a = self.poly.shift_up((self.shift - lo) as usize);
        let b = other.poly.shift_up((other.shift - lo) as usize);
        Laurent::from_poly(a.add(&b), lo)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Laurent {
            shift: self.shift,
            poly: self.poly.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Laurent::from_poly(self.poly.mul(&other.poly), self.shift + other.shift)
    }

    pub fn scale(&self, c: &T) -> Self {
        Laurent::from_poly(self.poly.scale(c), self.shift)
    }

    pub fn mul_monomial(&self, k: i64) -> Self {
        if self.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            shift: self.shift + k,
            poly: self.poly.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Laurent::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Laurent<U> {
        Laurent::from_poly(self.poly.map(&f), self.shift)
    }
}

impl Laurent<Rat> {
    /// Evaluate at a nonzero rational.
    pub fn eval(&self, x: &Rat) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let v = self.poly.eval(x);
        v * rat_pow(x, self.shift)
    }
}

impl Laurent<Int> {
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let v = self.poly.map(|c| Rat::from_integer(c.clone())).eval(x);
        v * rat_pow(x, self.shift)
    }

    /// Exact division in Z[x, x^-1]; returns None when not divisible.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        if d.is_zero() {
            return None;
        }
        // Work over Q to sidestep coefficient-division order issues, then
        // check integrality.
        let (q, r) = self.poly.to_rat().div_rem(&d.poly.to_rat());
        if !r.is_zero() {
            return None;
        }
        if q.coeffs().iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(Laurent::from_poly(
            q.map(|c| c.to_integer()),
            self.shift - d.shift,
        ))
    }
}

/// x^k for rational x != 0 and any integer k.
pub fn rat_pow(x: &Rat, k: i64) -> Rat {
    if k == 0 {
        return Rat::one();
    }
    let mut acc = Rat::one();
    let base = if k > 0 {
        x.clone()
    } else {
        Rat::one() / x.clone()
    };
    for _ in 0..k.unsigned_abs() {
        acc *= base.clone();
    }
    acc
}

/// x^k for integer x and k >= 0.
pub fn int_pow(x: &Int, k: u64) -> Int {
    let mut acc = Int::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn ipoly(cs: &[i64]) -> Poly<Int> {
        Poly::from_coeffs(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn poly_mul_and_div() {
        let a = ipoly(&[-1, 0, 0, 1]); // x^3 - 1
        let b = ipoly(&[-1, 1]); // x - 1
        let q = a.div_exact(&b);
        assert_eq!(q, ipoly(&[1, 1, 1]));
        assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn poly_gcd_int() {
        let a = ipoly(&[-1, 0, 1]); // x^2 - 1
        let b = ipoly(&[1, 2, 1]); // (x+1)^2
        let g = gcd_int(&a, &b);
        assert_eq!(g, ipoly(&[1, 1]));
    }

    #[test]
    fn laurent_normalization() {
        let p = Laurent::from_poly(ipoly(&[0, 0, 3, 1]), -5);
        assert_eq!(p.order(), Some(-3));
        assert_eq!(p.top_degree(), Some(-2));
        assert_eq!(p.coeff(-3), int(3));
        assert_eq!(p.coeff(0), int(0));
    }

    #[test]
    fn laurent_arith() {
        // (x - 1) * (1 + x^-1) = x - x^-1
        let a = Laurent::from_poly(ipoly(&[-1, 1]), 0);
        let b = Laurent::from_poly(ipoly(&[1, 1]), -1);
        let c = a.mul(&b);
        assert_eq!(c.coeff(1), int(1));
        assert_eq!(c.coeff(-1), int(-1));
        assert_eq!(c.coeff(0), int(0));
        assert_eq!(c.div_exact(&a), Some(b));
    }

    #[test]
    fn laurent_eval() {
        // 3t + t^2 at t = 1/2: 3/2 + 1/4 = 7/4
        let p: Laurent<Rat> = Laurent::from_poly(
            Poly::from_coeffs(alloc::vec![Rat::zero(), rat(3, 1), rat(1, 1)]),
            0,
        );
        assert_eq!(p.eval(&rat(1, 2)), rat(7, 4));
    }
}
