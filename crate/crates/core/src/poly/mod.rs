//! Exact sparse polynomial arithmetic.
//!
//! [`BiPoly`] is a bivariate polynomial in x and y with arbitrary-precision
//! integer coefficients; Tutte polynomials live here. [`UniPoly`] is a
//! univariate polynomial with rational coefficients over a tagged variable
//! (y, λ, p, or q); specialisations such as chromatic and reliability
//! polynomials live there. Both keep a canonical form at all times: terms
//! sorted by exponent, no zero coefficients, rationals in lowest terms.

mod bipoly;
mod kronecker;
mod unipoly;

pub use bipoly::BiPoly;
pub use unipoly::{PolyVar, UniPoly};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

/// `r^k` without intermediate reduction.
pub(crate) fn rational_pow(r: &BigRational, k: u32) -> BigRational {
    // components stay coprime under powers, so no re-reduction is needed
    BigRational::new_raw(Pow::pow(r.numer(), k), Pow::pow(r.denom(), k))
}

/// `base^0 ..= base^max`, for clearing denominators during evaluation.
pub(crate) fn int_powers(base: &BigInt, max: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BigInt::one());
    for _ in 0..max {
        let next = out.last().unwrap() * base;
        out.push(next);
    }
    out
}

/// Canonical text form: plain decimal for integers, `num/den` otherwise.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the canonical text form accepted by `rational_string`.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let bad = |reason: String| crate::Error::Parse {
        what: "rational",
        reason,
    };
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|e| bad(format!("{s:?}: {e}")))?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|e| bad(format!("{s:?}: {e}")))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad(format!("{s:?} has zero denominator")));
    }
    Ok(BigRational::new(numer, denom))
}
