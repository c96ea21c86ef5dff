//! Univariate polynomials with rational coefficients and a tagged variable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::bipoly::json_exponent;
use super::{int_powers, kronecker, rational_string};
use crate::{Error, Result};

/// The variable a [`UniPoly`] ranges over. Keeping the tag in the type
/// stops, say, a polynomial in y from being mistaken for one in p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyVar {
    Y,
    Lambda,
    P,
    Q,
}

impl PolyVar {
    /// ASCII name used in JSON output.
    pub fn json_name(self) -> &'static str {
        match self {
            PolyVar::Y => "y",
            PolyVar::Lambda => "lambda",
            PolyVar::P => "p",
            PolyVar::Q => "q",
        }
    }

    /// Symbol used in human-readable output.
    pub fn symbol(self) -> &'static str {
        match self {
            PolyVar::Y => "y",
            PolyVar::Lambda => "λ",
            PolyVar::P => "p",
            PolyVar::Q => "q",
        }
    }

    pub fn from_json_name(s: &str) -> Option<PolyVar> {
        match s {
            "y" => Some(PolyVar::Y),
            "lambda" => Some(PolyVar::Lambda),
            "p" => Some(PolyVar::P),
            "q" => Some(PolyVar::Q),
            _ => None,
        }
    }
}

/// Sparse exact univariate polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    var: PolyVar,
    terms: BTreeMap<u32, BigRational>,
}

impl UniPoly {
    pub fn zero(var: PolyVar) -> Self {
        UniPoly {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(var: PolyVar, c: BigRational) -> Self {
        UniPoly::from_terms(var, [(0, c)])
    }

    pub fn monomial(var: PolyVar, deg: u32, c: BigRational) -> Self {
        UniPoly::from_terms(var, [(deg, c)])
    }

    pub fn from_terms(var: PolyVar, terms: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
        let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (deg, c) in terms {
            let slot = out.entry(deg).or_insert_with(BigRational::zero);
            *slot += c;
        }
        out.retain(|_, c| !c.is_zero());
        UniPoly { var, terms: out }
    }

    pub fn var(&self) -> PolyVar {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn coeff(&self, deg: u32) -> BigRational {
        self.terms
            .get(&deg)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.terms.iter().map(|(&d, c)| (d, c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        assert_eq!(self.var, other.var, "mixed-variable polynomial arithmetic");
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            let slot = terms.entry(*d).or_insert_with(BigRational::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        UniPoly {
            var: self.var,
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero(self.var);
        }
        UniPoly {
            var: self.var,
            terms: self.terms.iter().map(|(d, v)| (*d, v * c)).collect(),
        }
    }

    /// Multiplies by var^k.
    pub fn shift(&self, k: u32) -> UniPoly {
        UniPoly {
            var: self.var,
            terms: self.terms.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    /// Product over a common cleared denominator, so the heavy lifting runs
    /// on integers regardless of coefficient type.
    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        assert_eq!(self.var, other.var, "mixed-variable polynomial arithmetic");
        let (ia, da) = self.cleared();
        let (ib, db) = other.cleared();
        let prod = kronecker::mul_term_maps(&ia, &ib);
        let den = da * db;
        UniPoly::from_terms(
            self.var,
            prod.into_iter()
                .map(|((d, _), c)| (d, BigRational::new(c, den.clone()))),
        )
    }

    /// Integer rescaling: (lcm of denominators, terms times that lcm).
    fn cleared(&self) -> (BTreeMap<(u32, u32), BigInt>, BigInt) {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let map = self
            .terms
            .iter()
            .map(|(&d, c)| ((d, 0u32), c.numer() * (&den / c.denom())))
            .collect();
        (map, den)
    }

    pub fn pow(&self, mut k: u64) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::constant(self.var, BigRational::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let deg = self.degree();
        let np = int_powers(at.numer(), deg);
        let dp = int_powers(at.denom(), deg);
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut sum = BigInt::zero();
        for (&d, c) in &self.terms {
            sum += c.numer() * (&den / c.denom()) * &np[d as usize] * &dp[(deg - d) as usize];
        }
        BigRational::new(sum, den * &dp[deg as usize])
    }

    /// Maps a(y) to q^nullity · a(1/q): degree k becomes nullity - k.
    /// This is the step that turns a Tutte specialisation at x = 1 into an
    /// all-terminal reliability factor.
    pub fn reciprocal_transform(&self, nullity: u32) -> Result<UniPoly> {
        let degree = self.degree();
        if degree > nullity {
            return Err(Error::DegreeExceedsNullity { degree, nullity });
        }
        Ok(UniPoly {
            var: PolyVar::Q,
            terms: self
                .terms
                .iter()
                .map(|(&d, c)| (nullity - d, c.clone()))
                .collect(),
        })
    }

    /// Composition with an affine argument: returns a(c0 + c1·t) in the
    /// requested output variable. Dense Horner, O(degree²) coefficient ops.
    pub fn substitute_affine(&self, c0: &BigRational, c1: &BigRational, var: PolyVar) -> UniPoly {
        let Some(&max_k) = self.terms.keys().next_back() else {
            return UniPoly::zero(var);
        };
        // All-integer inputs go through a BigInt-only path; the rational
        // fallback pays a gcd reduction on every operation, which is ruinous
        // for long polynomials like late-generation reliability factors.
        if c0.denom().is_one()
            && c1.denom().is_one()
            && self.terms.values().all(|c| c.denom().is_one())
        {
            return self.substitute_affine_int(c0.numer(), c1.numer(), max_k, var);
        }
        let mut acc: Vec<BigRational> = vec![self.terms[&max_k].clone()];
        for k in (0..max_k).rev() {
            // acc ← acc·(c0 + c1·t) + b_k
            let mut next = Vec::with_capacity(acc.len() + 1);
            next.push(&acc[0] * c0);
            for j in 1..acc.len() {
                next.push(&acc[j] * c0 + &acc[j - 1] * c1);
            }
            next.push(acc.last().unwrap() * c1);
            if let Some(c) = self.terms.get(&k) {
                next[0] += c;
            }
            acc = next;
        }
        UniPoly::from_terms(var, acc.into_iter().enumerate().map(|(d, c)| (d as u32, c)))
    }

    fn substitute_affine_int(&self, c0: &BigInt, c1: &BigInt, max_k: u32, var: PolyVar) -> UniPoly {
        fn unit(c: &BigInt) -> Option<i8> {
            if c.is_one() {
                Some(1)
            } else if (-c).is_one() {
                Some(-1)
            } else {
                None
            }
        }
        // t := 1 - u is the reliability and chromatic hot path; updating the
        // row in place keeps the quadratically many cell ops allocation-free
        if c0.is_one() && unit(c1) == Some(-1) {
            let mut acc: Vec<BigInt> = vec![self.terms[&max_k].numer().clone()];
            for k in (0..max_k).rev() {
                acc.push(-acc.last().unwrap().clone());
                for j in (1..acc.len() - 1).rev() {
                    let (lo, hi) = acc.split_at_mut(j);
                    hi[0] -= &lo[j - 1];
                }
                if let Some(c) = self.terms.get(&k) {
                    acc[0] += c.numer();
                }
            }
            return UniPoly::from_terms(
                var,
                acc.into_iter()
                    .enumerate()
                    .map(|(d, c)| (d as u32, BigRational::from_integer(c))),
            );
        }
        // cell(cur, prev) = cur·c0 + prev·c1; ±1 constants skip the scalar
        // multiply passes, which otherwise dominate on long polynomials
        type CellOp<'a> = Box<dyn Fn(&BigInt, &BigInt) -> BigInt + 'a>;
        let cell: CellOp = match (unit(c0), unit(c1)) {
            (Some(1), Some(1)) => Box::new(|cur, prev| cur + prev),
            (Some(1), Some(-1)) => Box::new(|cur, prev| cur - prev),
            (Some(-1), Some(1)) => Box::new(|cur, prev| prev - cur),
            (Some(-1), Some(-1)) => Box::new(|cur, prev| -(cur + prev)),
            _ => Box::new(move |cur, prev| cur * c0 + prev * c1),
        };
        let mut acc: Vec<BigInt> = vec![self.terms[&max_k].numer().clone()];
        for k in (0..max_k).rev() {
            let mut next = Vec::with_capacity(acc.len() + 1);
            next.push(&acc[0] * c0);
            for j in 1..acc.len() {
                next.push(cell(&acc[j], &acc[j - 1]));
            }
            next.push(acc.last().unwrap() * c1);
            if let Some(c) = self.terms.get(&k) {
                next[0] += c.numer();
            }
            acc = next;
        }
        UniPoly::from_terms(
            var,
            acc.into_iter()
                .enumerate()
                .map(|(d, c)| (d as u32, BigRational::from_integer(c))),
        )
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&d, c)| json!([d, rational_string(c)]))
            .collect();
        json!({ "var": self.var.json_name(), "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<UniPoly> {
        let bad = |reason: String| Error::Parse {
            what: "univariate polynomial JSON",
            reason,
        };
        let obj = v.as_object().ok_or_else(|| bad("not an object".into()))?;
        let var = obj
            .get("var")
            .and_then(Value::as_str)
            .and_then(PolyVar::from_json_name)
            .ok_or_else(|| bad("var must be one of y, lambda, p, q".into()))?;
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms array".into()))?;
        let mut pairs = Vec::with_capacity(terms.len());
        for t in terms {
            let item = t
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad(format!("term {t} is not a [degree, coeff] pair")))?;
            let d = json_exponent(&item[0]).ok_or_else(|| bad(format!("bad degree in {t}")))?;
            let c = item[1]
                .as_str()
                .ok_or_else(|| bad(format!("coefficient in {t} must be a string")))?;
            pairs.push((d, super::parse_rational(c)?));
        }
        Ok(UniPoly::from_terms(var, pairs))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let sym = self.var.symbol();
        for (idx, (&d, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = rational_string(&c.abs());
            if d == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    write!(f, "{mag} ")?;
                }
                f.write_str(sym)?;
                if d > 1 {
                    write!(f, "^{d}")?;
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        UniPoly::add(self, rhs)
    }
}

impl std::ops::Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        UniPoly::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn mul_handles_rational_coefficients() {
        // (y/2 + 1)(y/3 - 1) = y^2/6 - y/6 - 1
        let a = UniPoly::from_terms(PolyVar::Y, [(1, ratio(1, 2)), (0, rat(1))]);
        let b = UniPoly::from_terms(PolyVar::Y, [(1, ratio(1, 3)), (0, rat(-1))]);
        let expect = UniPoly::from_terms(
            PolyVar::Y,
            [(2, ratio(1, 6)), (1, ratio(-1, 6)), (0, rat(-1))],
        );
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let a = UniPoly::from_terms(PolyVar::Y, [(1, rat(1)), (0, rat(2))]);
        let mut by_mul = UniPoly::constant(PolyVar::Y, rat(1));
        for _ in 0..5 {
            by_mul = by_mul.mul(&a);
        }
        assert_eq!(a.pow(5), by_mul);
        assert_eq!(a.pow(0), UniPoly::constant(PolyVar::Y, rat(1)));
    }

    #[test]
    fn eval_exact() {
        // 2y^2 - y/2 at 3/2 -> 9/2 - 3/4 = 15/4
        let a = UniPoly::from_terms(PolyVar::Y, [(2, rat(2)), (1, ratio(-1, 2))]);
        assert_eq!(a.eval(&ratio(3, 2)), ratio(15, 4));
    }

    #[test]
    fn reciprocal_transform_reverses_degrees() {
        // y + 2 with nullity 1 -> q(1/q + 2) = 2q + 1
        let a = UniPoly::from_terms(PolyVar::Y, [(1, rat(1)), (0, rat(2))]);
        let t = a.reciprocal_transform(1).unwrap();
        assert_eq!(
            t,
            UniPoly::from_terms(PolyVar::Q, [(1, rat(2)), (0, rat(1))])
        );
        // degree above the nullity cannot be inverted into a polynomial
        assert!(matches!(
            a.reciprocal_transform(0),
            Err(Error::DegreeExceedsNullity {
                degree: 1,
                nullity: 0
            })
        ));
        // constants survive any nullity
        let c = UniPoly::constant(PolyVar::Y, rat(1));
        assert_eq!(c.reciprocal_transform(0).unwrap().coeff(0), rat(1));
    }

    #[test]
    fn substitute_affine_composes() {
        // a(y) = y^2 + 1, y := 1 - p  ->  p^2 - 2p + 2
        let a = UniPoly::from_terms(PolyVar::Q, [(2, rat(1)), (0, rat(1))]);
        let b = a.substitute_affine(&rat(1), &rat(-1), PolyVar::P);
        assert_eq!(
            b,
            UniPoly::from_terms(PolyVar::P, [(2, rat(1)), (1, rat(-2)), (0, rat(2))])
        );
    }

    #[test]
    fn display_uses_unicode_lambda() {
        let p = UniPoly::from_terms(PolyVar::Lambda, [(3, rat(1)), (2, rat(-3)), (1, rat(2))]);
        assert_eq!(p.to_string(), "λ^3 - 3 λ^2 + 2 λ");
        let half = UniPoly::from_terms(PolyVar::P, [(1, ratio(1, 2))]);
        assert_eq!(half.to_string(), "1/2 p");
    }

    #[test]
    fn json_round_trip_uses_ascii_names() {
        let p = UniPoly::from_terms(PolyVar::Lambda, [(2, ratio(-1, 3)), (0, rat(2))]);
        let j = p.to_json();
        assert_eq!(j["var"], "lambda");
        assert_eq!(j["terms"][0].to_string(), r#"[0,"2"]"#);
        assert_eq!(j["terms"][1].to_string(), r#"[2,"-1/3"]"#);
        assert_eq!(UniPoly::from_json(&j).unwrap(), p);
    }
}
