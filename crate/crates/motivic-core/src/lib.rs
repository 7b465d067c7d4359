//! Exact symbolic computation for constructible motivic functions.
//!
//! The crate implements, over the three-sorted Denef-Pas language
//! (valued field / residue field / value group):
//!
//! - a typed formula AST with parser, canonical printer, substitution and
//!   exact evaluation ([`formula`]);
//! - quantifier elimination and lattice-cone normal forms for the
//!   Presburger sort ([`presburger`]);
//! - exact arithmetic in `Z[L, L^-1, (1 - L^-i)^-1]` with the
//!   specialization `L -> q` and a positivity decision ([`ring_a`]);
//! - Grothendieck (semi)ring classes of residue-sort definable sets with a
//!   finite-field counting oracle ([`k0`]);
//! - constructible functions: indicators, `L^beta` factors, pullback and
//!   residue pushforward, and the dimension grading ([`constructible`]);
//! - closed-form summation over `Z^r` fibers ([`summation`]);
//! - cell-based motivic integration, change of variables, and the relative
//!   (parametric) theory ([`integrator`]).
//!
//! Everything is exact: integers are arbitrary precision, field constants
//! are rationals, and no floating point is used anywhere. The crate is
//! `no_std`-compatible (with `alloc`); IO, file formats, and the `mi`
//! command line live in the companion crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod constructible;
pub mod formula;
pub mod gf;
pub mod integrator;
pub mod k0;
pub mod linalg;
pub mod poly;
pub mod presburger;
pub mod ring_a;
pub mod sturm;
pub mod summation;

/// Arbitrary-precision integer used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Exact rational used for field constants and specializations.
pub type Rat = num_rational::BigRational;

pub(crate) fn int(v: i64) -> Int {
    Int::from(v)
}

pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}
