//! Bivariate polynomials in x and y with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{int_powers, kronecker, PolyVar, UniPoly};
use crate::{Error, Result};

/// Sparse exact polynomial in x and y.
///
/// Terms are keyed by exponent pair `(degX, degY)`; zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        BiPoly::monomial(0, 1, 1)
    }

    pub fn monomial(deg_x: u32, deg_y: u32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg_x, deg_y), c);
        }
        BiPoly { terms }
    }

    /// Builds a polynomial from (degX, degY, coefficient) triples, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<T: Into<BigInt>>(terms: impl IntoIterator<Item = (u32, u32, T)>) -> Self {
        let mut out = BTreeMap::new();
        for (dx, dy, c) in terms {
            let c = c.into();
            let slot = out.entry((dx, dy)).or_insert_with(BigInt::zero);
            *slot += c;
        }
        out.retain(|_, c: &mut BigInt| !c.is_zero());
        BiPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree in x; 0 for the zero polynomial.
    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Degree in y; 0 for the zero polynomial.
    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Coefficient of x^degX y^degY (zero when the term is absent).
    pub fn coeff(&self, deg_x: u32, deg_y: u32) -> BigInt {
        self.terms
            .get(&(deg_x, deg_y))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(dx, dy), c)| (dx, dy, c))
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let slot = terms.entry(*k).or_insert_with(BigInt::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        BiPoly { terms }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let slot = terms.entry(*k).or_insert_with(BigInt::zero);
            *slot -= c;
        }
        terms.retain(|_, c| !c.is_zero());
        BiPoly { terms }
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    /// Multiplies by x^dx y^dy.
    pub fn shift(&self, dx: u32, dy: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + dx, b + dy), c.clone()))
                .collect(),
        }
    }

    pub fn mul_scalar(&self, c: &BigInt) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        BiPoly {
            terms: kronecker::mul_term_maps(&self.terms, &other.terms),
        }
    }

    /// `self^k` by repeated squaring. Refused up front when the dense size
    /// of the result, (degX·k+1)·(degY·k+1) coefficient cells, would exceed
    /// `cell_cap`; nothing is allocated in that case.
    pub fn pow(&self, k: u64, cell_cap: u64) -> Result<BiPoly> {
        if k == 0 {
            return Ok(BiPoly::one());
        }
        if self.is_zero() {
            return Ok(BiPoly::zero());
        }
        let cells = (self.deg_x() as u128 * k as u128 + 1) * (self.deg_y() as u128 * k as u128 + 1);
        if cells > cell_cap as u128 {
            return Err(Error::ExpansionTooLarge {
                cells,
                cap: cell_cap,
            });
        }
        Ok(self.pow_unchecked(k))
    }

    pub(crate) fn pow_unchecked(&self, mut k: u64) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
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

    /// Exact evaluation at a rational point. Denominators are cleared first
    /// so the whole sum runs over integers.
    pub fn eval(&self, x0: &BigRational, y0: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (dx, dy) = (self.deg_x(), self.deg_y());
        let xn = int_powers(x0.numer(), dx);
        let xd = int_powers(x0.denom(), dx);
        let yn = int_powers(y0.numer(), dy);
        let yd = int_powers(y0.denom(), dy);
        let mut sum = BigInt::zero();
        for (&(i, j), c) in &self.terms {
            sum += c
                * &xn[i as usize]
                * &xd[(dx - i) as usize]
                * &yn[j as usize]
                * &yd[(dy - j) as usize];
        }
        BigRational::new(sum, &xd[dx as usize] * &yd[dy as usize])
    }

    /// Fixes x at a rational constant, leaving a univariate polynomial in y.
    pub fn partial_eval_x(&self, x0: &BigRational) -> UniPoly {
        let dx = self.deg_x();
        let xn = int_powers(x0.numer(), dx);
        let xd = int_powers(x0.denom(), dx);
        let mut rows: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let slot = rows.entry(j).or_insert_with(BigInt::zero);
            *slot += c * &xn[i as usize] * &xd[(dx - i) as usize];
        }
        let full = &xd[dx as usize];
        UniPoly::from_terms(
            PolyVar::Y,
            rows.into_iter()
                .map(|(j, c)| (j, BigRational::new(c, full.clone()))),
        )
    }

    /// Substitutes x := c0 + c1·t and y := 0, producing a univariate
    /// polynomial in the requested variable. This is the bridge from Tutte
    /// polynomials to chromatic polynomials (t = λ, c0 = 1, c1 = -1).
    pub fn substitute_x_affine(&self, c0: &BigRational, c1: &BigRational, var: PolyVar) -> UniPoly {
        let x_row = UniPoly::from_terms(
            var,
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j == 0)
                .map(|(&(i, _), c)| (i, BigRational::from(c.clone()))),
        );
        x_row.substitute_affine(c0, c1, var)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(dx, dy), c)| json!([dx, dy, c.to_string()]))
            .collect();
        json!({ "vars": ["x", "y"], "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<BiPoly> {
        let bad = |reason: String| Error::Parse {
            what: "bivariate polynomial JSON",
            reason,
        };
        let obj = v.as_object().ok_or_else(|| bad("not an object".into()))?;
        let vars = obj.get("vars").and_then(Value::as_array);
        let names: Vec<&str> = vars
            .map(|a| a.iter().filter_map(Value::as_str).collect())
            .unwrap_or_default();
        if names != ["x", "y"] {
            return Err(bad(format!("vars must be [\"x\",\"y\"], got {:?}", names)));
        }
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms array".into()))?;
        let mut triples = Vec::with_capacity(terms.len());
        for t in terms {
            let item = t
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| bad(format!("term {t} is not a [degX, degY, coeff] triple")))?;
            let dx = json_exponent(&item[0]).ok_or_else(|| bad(format!("bad degX in {t}")))?;
            let dy = json_exponent(&item[1]).ok_or_else(|| bad(format!("bad degY in {t}")))?;
            let c: BigInt = item[2]
                .as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("bad coefficient in {t}")))?;
            triples.push((dx, dy, c));
        }
        Ok(BiPoly::from_terms(triples))
    }
}

pub(crate) fn json_exponent(v: &Value) -> Option<u32> {
    v.as_u64().and_then(|n| u32::try_from(n).ok())
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (&(dx, dy), c)) in self.terms.iter().rev().enumerate() {
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
            let mag = c.abs();
            let mono = monomial_string(dx, dy);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag} {mono}")?;
            }
        }
        Ok(())
    }
}

fn monomial_string(dx: u32, dy: u32) -> String {
    let mut s = String::new();
    for (name, d) in [("x", dx), ("y", dy)] {
        if d == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(name);
        if d > 1 {
            s.push_str(&format!("^{d}"));
        }
    }
    s
}

impl std::ops::Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn triangle() -> BiPoly {
        BiPoly::from_terms([(2, 0, 1), (1, 0, 1), (0, 1, 1)])
    }

    #[test]
    fn addition_merges_and_cancels() {
        let p = BiPoly::from_terms([(1, 0, 1), (0, 1, 2)]);
        let q = BiPoly::from_terms([(1, 0, -1), (0, 0, 5)]);
        assert_eq!(p.add(&q), BiPoly::from_terms([(0, 1, 2), (0, 0, 5)]));
        assert_eq!(p.add(&BiPoly::zero()), p);
    }

    #[test]
    fn multiplication_expands_products() {
        // (x + 1)(x - 1) = x^2 - 1
        let a = BiPoly::from_terms([(1, 0, 1), (0, 0, 1)]);
        let b = BiPoly::from_terms([(1, 0, 1), (0, 0, -1)]);
        assert_eq!(a.mul(&b), BiPoly::from_terms([(2, 0, 1), (0, 0, -1)]));
        assert!(a.mul(&BiPoly::zero()).is_zero());
    }

    #[test]
    fn pow_small_cases() {
        let t = triangle();
        assert_eq!(t.pow(0, 100).unwrap(), BiPoly::one());
        assert_eq!(t.pow(1, 100).unwrap(), t);
        let sq = t.pow(2, 100).unwrap();
        assert_eq!(sq, t.mul(&t));
        // sum of coefficients of (x^2+x+y)^4 is 3^4
        let p4 = t.pow(4, 1000).unwrap();
        assert_eq!(p4.eval(&rat(1), &rat(1)), rat(81));
    }

    #[test]
    fn pow_budget_is_enforced() {
        let t = triangle();
        let err = t.pow(10_000, 1000).unwrap_err();
        assert!(matches!(err, Error::ExpansionTooLarge { .. }));
        assert!(err.is_budget());
    }

    #[test]
    fn eval_clears_denominators_exactly() {
        let t = triangle();
        // (1/2)^2 + 1/2 + 1/3 = 13/12
        let v = t.eval(
            &BigRational::new(1.into(), 2.into()),
            &BigRational::new(1.into(), 3.into()),
        );
        assert_eq!(v, BigRational::new(13.into(), 12.into()));
        assert_eq!(BiPoly::zero().eval(&rat(5), &rat(7)), rat(0));
    }

    #[test]
    fn partial_eval_x_leaves_y() {
        let t = triangle();
        let u = t.partial_eval_x(&rat(1));
        // x^2+x+y at x=1 is y+2
        assert_eq!(
            u,
            UniPoly::from_terms(PolyVar::Y, [(0, rat(2)), (1, rat(1))])
        );
    }

    #[test]
    fn substitute_affine_drops_y_terms() {
        let t = triangle();
        // x := 1 - λ, y := 0 gives (1-λ)^2 + (1-λ) = λ^2 - 3λ + 2
        let u = t.substitute_x_affine(&rat(1), &rat(-1), PolyVar::Lambda);
        let expect = UniPoly::from_terms(PolyVar::Lambda, [(0, rat(2)), (1, rat(-3)), (2, rat(1))]);
        assert_eq!(u, expect);
        // pure y terms vanish entirely
        let v = BiPoly::y().substitute_x_affine(&rat(1), &rat(-1), PolyVar::Lambda);
        assert!(v.is_zero());
    }

    #[test]
    fn display_orders_terms_descending() {
        assert_eq!(triangle().to_string(), "x^2 + x + y");
        let p = BiPoly::from_terms([(0, 0, -1), (1, 1, 3), (0, 2, -2)]);
        assert_eq!(p.to_string(), "3 x y - 2 y^2 - 1");
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_round_trip() {
        let t = triangle();
        let j = t.to_json();
        assert_eq!(
            j.to_string(),
            r#"{"terms":[[0,1,"1"],[1,0,"1"],[2,0,"1"]],"vars":["x","y"]}"#
        );
        assert_eq!(BiPoly::from_json(&j).unwrap(), t);
        let neg = BiPoly::from_terms([(3, 2, -12345678901234567890i128)]);
        assert_eq!(BiPoly::from_json(&neg.to_json()).unwrap(), neg);
    }

    #[test]
    fn json_rejects_malformed_input() {
        for bad in [
            r#"{"vars":["x"],"terms":[]}"#,
            r#"{"vars":["x","y"],"terms":[[1,2]]}"#,
            r#"{"vars":["x","y"],"terms":[[1,2,3]]}"#,
            r#"{"vars":["x","y"]}"#,
        ] {
            let v: Value = serde_json::from_str(bad).unwrap();
            assert!(BiPoly::from_json(&v).is_err(), "accepted {bad}");
        }
    }
}
