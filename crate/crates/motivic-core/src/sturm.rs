//! Sturm sequences and sign analysis of integer polynomials on `(1, oo)`.
//!
//! The nonnegativity decision used by the positivity cone works through the
//! odd-multiplicity part: `P >= 0` on `(1, oo)` iff `P` is zero, or its
//! leading coefficient is positive and the squarefree product of its
//! odd-multiplicity factors has no root there (sign changes happen exactly
//! at odd-multiplicity roots).

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::poly::{clear_denominators, Poly};
use crate::{Int, Rat};

/// Sturm chain of a squarefree rational polynomial.
fn sturm_chain(p: &Poly<Rat>) -> Vec<Poly<Rat>> {
    let mut chain = Vec::new();
    if p.is_zero() {
        return chain;
    }
    chain.push(p.clone());
    let dp = p.derivative();
    if dp.is_zero() {
        return chain;
    }
    chain.push(dp);
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push(r.neg());
    }
}

fn sign_rat(q: &Rat) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of a squarefree polynomial in `(a, oo)`.
/// `a` must not be a root.
fn count_roots_above(p: &Poly<Rat>, a: &Rat) -> usize {
    let chain = sturm_chain(p);
    if chain.is_empty() {
        return 0;
    }
    debug_assert!(!chain[0].eval(a).is_zero(), "endpoint is a root");
    let at_a = variations(chain.iter().map(|s| sign_rat(&s.eval(a))));
    let at_inf = variations(chain.iter().map(|s| match s.leading() {
        None => 0,
        Some(c) => sign_rat(c),
    }));
    at_a - at_inf
}

/// Squarefree decomposition over Q (Yun): returns `(factor, multiplicity)`
/// with each factor squarefree, pairwise coprime, multiplicities ascending.
fn squarefree_decomposition(p: &Poly<Rat>) -> Vec<(Poly<Rat>, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let mut g = p.gcd(&dp);
    let (mut w, _) = p.div_rem(&g);
    let mut mult = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&g);
        let (z, _) = w.div_rem(&y);
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, mult));
        }
        w = y;
        let (g2, _) = g.div_rem(&w);
        g = g2;
        mult += 1;
    }
    out
}

/// Product of the odd-multiplicity squarefree factors; the sign-change
/// locus of `p`.
fn odd_part(p: &Poly<Rat>) -> Poly<Rat> {
    let mut acc = Poly::one();
    for (f, m) in squarefree_decomposition(p) {
        if m % 2 == 1 {
            acc = acc.mul(&f);
        }
    }
    acc
}

/// Decide `p(x) >= 0` for every real `x > 1`, exactly.
pub fn nonneg_on_one_to_infinity(p: &Poly<Int>) -> bool {
    if p.is_zero() {
        return true;
    }
    if p.leading().unwrap().is_negative() {
        return false;
    }
    let pq = p.to_rat();
    let mut odd = odd_part(&pq);
    if odd.degree().unwrap_or(0) == 0 {
        return true;
    }
    // Exclude a root exactly at 1 (allowed: the interval is open).
    let one = Rat::one();
    while odd.eval(&one).is_zero() {
        let linear = Poly::from_coeffs(alloc::vec![-Rat::one(), Rat::one()]);
        let (q, r) = odd.div_rem(&linear);
        debug_assert!(r.is_zero());
        odd = q;
    }
    if odd.degree().unwrap_or(0) == 0 {
        return true;
    }
    count_roots_above(&odd, &one) == 0
}

/// Number of distinct real roots of an arbitrary integer polynomial in
/// `(1, oo)`.
pub fn distinct_roots_above_one(p: &Poly<Int>) -> usize {
    if p.is_zero() {
        return 0;
    }
    let pq = p.to_rat();
    let dp = pq.derivative();
    let g = pq.gcd(&dp);
    let (mut radical, _) = pq.div_rem(&g);
    let one = Rat::one();
    while radical.eval(&one).is_zero() {
        let linear = Poly::from_coeffs(alloc::vec![-Rat::one(), Rat::one()]);
        let (q, r) = radical.div_rem(&linear);
        debug_assert!(r.is_zero());
        radical = q;
    }
    if radical.degree().unwrap_or(0) == 0 {
        return 0;
    }
    count_roots_above(&radical, &one)
}

/// Rebuild an integer polynomial from a rational one (clearing
/// denominators); exported for tests.
pub fn to_int_poly(p: &Poly<Rat>) -> Poly<Int> {
    clear_denominators(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn ipoly(cs: &[i64]) -> Poly<Int> {
        Poly::from_coeffs(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn counts_roots() {
        // (x-2)(x-3) = x^2 - 5x + 6
        let p = ipoly(&[6, -5, 1]);
        assert_eq!(distinct_roots_above_one(&p), 2);
        // x^2 - 3: one root above 1
        assert_eq!(distinct_roots_above_one(&ipoly(&[-3, 0, 1])), 1);
        // x - 1: root exactly at 1 does not count
        assert_eq!(distinct_roots_above_one(&ipoly(&[-1, 1])), 0);
    }

    #[test]
    fn nonnegativity() {
        // x - 1 >= 0 on (1, oo)
        assert!(nonneg_on_one_to_infinity(&ipoly(&[-1, 1])));
        // x - 2 dips negative on (1, 2)
        assert!(!nonneg_on_one_to_infinity(&ipoly(&[-2, 1])));
        // (x-2)^2 >= 0
        assert!(nonneg_on_one_to_infinity(&ipoly(&[4, -4, 1])));
        // (x-2)^3 changes sign at 2
        assert!(!nonneg_on_one_to_infinity(&ipoly(&[-8, 12, -6, 1])));
        // (x-1)(x-3) + 1 = x^2 - 4x + 4 = (x-2)^2
        assert!(nonneg_on_one_to_infinity(&ipoly(&[4, -4, 1])));
        // -(x-2)^2 is nonpositive
        assert!(!nonneg_on_one_to_infinity(&ipoly(&[-4, 4, -1])));
        // constants
        assert!(nonneg_on_one_to_infinity(&ipoly(&[5])));
        assert!(!nonneg_on_one_to_infinity(&ipoly(&[-5])));
        assert!(nonneg_on_one_to_infinity(&ipoly(&[])));
        // x^2 - 3 is negative on (1, sqrt(3))
        assert!(!nonneg_on_one_to_infinity(&ipoly(&[-3, 0, 1])));
    }

    #[test]
    fn dense_sampling_agrees() {
        // Spot-check the decision against sampling for a batch of
        // polynomials with roots around the interval.
        let polys = [
            alloc::vec![6, -5, 1],
            alloc::vec![4, -4, 1],
            alloc::vec![-8, 12, -6, 1],
            alloc::vec![1, 0, 1],
            alloc::vec![0, 1],
            alloc::vec![2, -3, 1],   // (x-1)(x-2)
            alloc::vec![-2, 3, -1],  // -(x-1)(x-2)
        ];
        for cs in polys {
            let p = Poly::from_coeffs(cs.iter().map(|&c| int(c)).collect::<Vec<_>>());
            let decision = nonneg_on_one_to_infinity(&p);
            let mut sampled = true;
            for k in 1..=400 {
                let q = Rat::new(int(100 + k), int(100));
                if p.to_rat().eval(&q).is_negative() {
                    sampled = false;
                    break;
                }
            }
            // Sampling can only refute; agreement required when it refutes.
            if !sampled {
                assert!(!decision, "sampling found a negative value: {cs:?}");
            }
            if decision {
                assert!(sampled, "decision says nonnegative but sample negative: {cs:?}");
            }
        }
    }
}
