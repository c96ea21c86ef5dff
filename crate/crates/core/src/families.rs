//! Tutte polynomials of the Koch and exponential triangle networks, kept in
//! factored power form, plus the Potts partition-function bridge.
//!
//! Both families grow by gluing triangles onto existing vertices. A
//! one-point join multiplies Tutte polynomials, so every member's Tutte
//! polynomial is a pure power of the triangle's:
//!
//! ```text
//!     T(K_{m,n}) = (x^2 + x + y)^((3m+1)^n)       Koch network
//!     T(S_n)     = (x^2 + x + y)^((3^(n+1)-1)/2)  exponential network
//! ```
//!
//! The exponents outgrow any expansion budget after a handful of
//! generations, so [`PowerForm`] keeps `base^exponent` unevaluated and
//! expansion is opt-in. Point evaluations collapse to [`CountForm`], an
//! integer power that is likewise rendered to digits only on request.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::poly::{rational_pow, rational_string, BiPoly, PolyVar, UniPoly};
use crate::{Error, Limits, Result};

/// A bivariate polynomial in factored form `base^exponent`.
///
/// The exponent is an arbitrary-precision nonnegative integer; nothing is
/// expanded until [`PowerForm::expand`] is called, so forms whose expanded
/// size is astronomical remain cheap to build, print, and evaluate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerForm {
    base: BiPoly,
    exponent: BigInt,
}

impl PowerForm {
    pub fn new(base: BiPoly, exponent: BigInt) -> Self {
        assert!(!exponent.is_negative(), "power form exponent must be >= 0");
        PowerForm { base, exponent }
    }

    pub fn base(&self) -> &BiPoly {
        &self.base
    }

    pub fn exponent(&self) -> &BigInt {
        &self.exponent
    }

    /// Evaluates the base at a rational point, keeping the exponent symbolic.
    ///
    /// Count semantics require the evaluated base to be an integer; a
    /// rational value reports [`Error::NonIntegerBase`] instead of silently
    /// producing a non-count.
    pub fn eval(&self, x0: &BigRational, y0: &BigRational) -> Result<CountForm> {
        let v = self.base.eval(x0, y0);
        if !v.denom().is_one() {
            return Err(Error::NonIntegerBase {
                value: rational_string(&v),
            });
        }
        let (base, _) = v.into_raw();
        Ok(CountForm::new(base, self.exponent.clone()))
    }

    /// Expands to an explicit polynomial, within the coefficient-cell budget.
    pub fn expand(&self, limits: &Limits) -> Result<BiPoly> {
        let k = self
            .exponent
            .to_u64()
            .ok_or_else(|| Error::ExponentTooLarge {
                exponent: self.exponent.to_string(),
            })?;
        self.base.pow(k, limits.pow_cell_cap)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_json(),
            "exponent": self.exponent.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<PowerForm> {
        let what = "power form";
        let obj = v.as_object().ok_or(Error::Parse {
            what,
            reason: "expected an object".into(),
        })?;
        let base = obj.get("base").ok_or(Error::Parse {
            what,
            reason: "missing field \"base\"".into(),
        })?;
        Ok(PowerForm::new(
            BiPoly::from_json(base)?,
            decimal_field(obj, what, "exponent")?,
        ))
    }
}

impl fmt::Display for PowerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.is_zero() {
            write!(f, "1")
        } else if self.exponent.is_one() {
            write!(f, "{}", self.base)
        } else {
            write!(f, "({})^{}", self.base, self.exponent)
        }
    }
}

/// An integer power `base^exponent`, the result of evaluating a
/// [`PowerForm`] at an integer point.
///
/// Counts like spanning-tree numbers of late-generation Koch networks have
/// hundreds of thousands of digits, so the factored pair is the primary
/// representation and [`CountForm::digits`] is budget-guarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountForm {
    base: BigInt,
    exponent: BigInt,
}

impl CountForm {
    pub fn new(base: BigInt, exponent: BigInt) -> Self {
        assert!(!exponent.is_negative(), "count form exponent must be >= 0");
        CountForm { base, exponent }
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    pub fn exponent(&self) -> &BigInt {
        &self.exponent
    }

    /// The count as one explicit integer, refused above the bit-size cap.
    pub fn to_integer(&self, limits: &Limits) -> Result<BigInt> {
        if self.exponent.is_zero() {
            return Ok(BigInt::one());
        }
        let mag_bits = self.base.magnitude().bits();
        if mag_bits <= 1 {
            // 0 and ±1 are exact at any exponent, no budget needed
            if self.base.is_negative() && self.exponent.is_even() {
                return Ok(BigInt::one());
            }
            return Ok(self.base.clone());
        }
        let bits = BigInt::from(mag_bits) * &self.exponent;
        if bits > BigInt::from(limits.digit_render_bit_cap) {
            return Err(Error::RenderTooLarge {
                bits: bits.to_string(),
                cap: limits.digit_render_bit_cap,
            });
        }
        let k = self
            .exponent
            .to_u64()
            .expect("bit bound keeps the exponent small");
        Ok(Pow::pow(&self.base, k))
    }

    /// Decimal rendering of [`CountForm::to_integer`].
    pub fn digits(&self, limits: &Limits) -> Result<String> {
        Ok(self.to_integer(limits)?.to_string())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_string(),
            "exponent": self.exponent.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<CountForm> {
        let what = "count form";
        let obj = v.as_object().ok_or(Error::Parse {
            what,
            reason: "expected an object".into(),
        })?;
        Ok(CountForm::new(
            decimal_field(obj, what, "base")?,
            decimal_field(obj, what, "exponent")?,
        ))
    }
}

impl fmt::Display for CountForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.is_one() {
            write!(f, "{}", self.base)
        } else if self.base.is_negative() {
            write!(f, "({})^{}", self.base, self.exponent)
        } else {
            write!(f, "{}^{}", self.base, self.exponent)
        }
    }
}

fn decimal_field(
    obj: &serde_json::Map<String, Value>,
    what: &'static str,
    field: &str,
) -> Result<BigInt> {
    let s = obj
        .get(field)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse {
            what,
            reason: format!("missing decimal string field {field:?}"),
        })?;
    let n: BigInt = s.parse().map_err(|e| Error::Parse {
        what,
        reason: format!("{field}: {s:?}: {e}"),
    })?;
    if n.is_negative() && field == "exponent" {
        return Err(Error::Parse {
            what,
            reason: format!("negative exponent {n}"),
        });
    }
    Ok(n)
}

fn triangle_poly() -> BiPoly {
    BiPoly::from_terms([(2, 0, 1), (1, 0, 1), (0, 1, 1)])
}

/// Tutte polynomial of the Koch network K_{m,n}: `(x^2 + x + y)^((3m+1)^n)`.
///
/// Generation 0 is a single triangle; each step glues 3m fresh triangles
/// onto every existing one, and one-point joins multiply Tutte polynomials.
pub fn koch_tutte(m: u32, n: u32) -> PowerForm {
    assert!(m >= 1, "Koch parameter m must be positive");
    let side = BigInt::from(3 * u64::from(m) + 1);
    PowerForm::new(triangle_poly(), Pow::pow(&side, n))
}

/// Tutte polynomial of the exponential network S_n:
/// `(x^2 + x + y)^((3^(n+1) - 1)/2)`.
///
/// S_n contains (3^(n+1) - 1)/2 triangles, each contributing one factor.
pub fn exp_tutte(n: u32) -> PowerForm {
    let e = (Pow::pow(&BigInt::from(3), u64::from(n) + 1) - 1) / 2;
    PowerForm::new(triangle_poly(), e)
}

/// Chromatic polynomial `λ (λ^2 - 3λ + 2)^u` of any connected graph whose
/// Tutte polynomial is `(x^2 + x + y)^u`, expanded under the cell budget.
///
/// The quadratic factor is the triangle's chromatic polynomial divided by
/// λ; the single λ in front accounts for the one shared color choice.
pub fn triangle_power_chromatic(exponent: &BigInt, limits: &Limits) -> Result<UniPoly> {
    let u = checked_unipower(exponent, 2, limits)?;
    let base = UniPoly::from_terms(PolyVar::Lambda, [(2u32, rat(1)), (1, rat(-3)), (0, rat(2))]);
    Ok(base.pow(u).shift(1))
}

/// All-terminal reliability `(3p^2 - 2p^3)^u` of any connected graph whose
/// Tutte polynomial is `(x^2 + x + y)^u`, expanded under the cell budget.
///
/// The cubic factor is the probability that a triangle with edges up
/// independently with probability p stays connected.
pub fn triangle_power_reliability(exponent: &BigInt, limits: &Limits) -> Result<UniPoly> {
    let u = checked_unipower(exponent, 3, limits)?;
    let base = UniPoly::from_terms(PolyVar::P, [(2u32, rat(3)), (3, rat(-2))]);
    Ok(base.pow(u))
}

fn checked_unipower(exponent: &BigInt, base_degree: u64, limits: &Limits) -> Result<u64> {
    let u = exponent.to_u64().ok_or_else(|| Error::ExponentTooLarge {
        exponent: exponent.to_string(),
    })?;
    let cells = base_degree as u128 * u as u128 + 2;
    if cells > u128::from(limits.pow_cell_cap) {
        return Err(Error::ExpansionTooLarge {
            cells,
            cap: limits.pow_cell_cap,
        });
    }
    Ok(u)
}

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

/// Potts partition function from a Tutte evaluation capability.
///
/// For a graph with `components` connected components and `num_vertices`
/// vertices,
///
/// ```text
///     Z(q, v) = (q/v)^components * v^numVertices * T(q/v + 1, v + 1)
/// ```
///
/// which equals the subset expansion Σ_{A⊆E} q^k(A) v^|A| exactly. Taking
/// T as a closure keeps this usable with family evaluators where no
/// explicit graph is ever materialised. `v0 = 0` has no Tutte-side image
/// and is rejected.
pub fn potts_partition<F>(
    tutte_at: F,
    components: u32,
    num_vertices: u32,
    q0: &BigRational,
    v0: &BigRational,
) -> Result<BigRational>
where
    F: FnOnce(&BigRational, &BigRational) -> Result<BigRational>,
{
    if v0.is_zero() {
        return Err(Error::ZeroPottsWeight);
    }
    let ratio = q0 / v0;
    let x0 = &ratio + BigRational::one();
    let y0 = v0 + BigRational::one();
    let t = tutte_at(&x0, &y0)?;
    Ok(rational_pow(&ratio, components) * rational_pow(v0, num_vertices) * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;
    use crate::oracle;

    fn limits() -> Limits {
        Limits::default()
    }

    fn int(i: i64) -> BigInt {
        BigInt::from(i)
    }

    #[test]
    fn koch_exponents() {
        assert_eq!(koch_tutte(1, 0).exponent(), &int(1));
        assert_eq!(koch_tutte(1, 1).exponent(), &int(4));
        assert_eq!(koch_tutte(2, 2).exponent(), &int(49));
        assert_eq!(koch_tutte(1, 5).exponent(), &int(1024));
        assert_eq!(koch_tutte(1, 0).base(), &triangle_poly());
    }

    #[test]
    fn exp_exponents() {
        let expect = [1, 4, 13, 40, 121, 364];
        for (n, e) in expect.into_iter().enumerate() {
            assert_eq!(exp_tutte(n as u32).exponent(), &int(e), "n = {n}");
        }
    }

    #[test]
    fn eval_to_counts() {
        let one = BigRational::from_integer(int(1));
        let two = BigRational::from_integer(int(2));

        let st = koch_tutte(1, 1).eval(&one, &one).unwrap();
        assert_eq!((st.base(), st.exponent()), (&int(3), &int(4)));
        assert_eq!(st.digits(&limits()).unwrap(), "81");

        let cssg = koch_tutte(1, 1).eval(&one, &two).unwrap();
        assert_eq!((cssg.base(), cssg.exponent()), (&int(4), &int(4)));
        assert_eq!(cssg.digits(&limits()).unwrap(), "256");

        let sp = exp_tutte(1).eval(&two, &one).unwrap();
        assert_eq!((sp.base(), sp.exponent()), (&int(7), &int(4)));
        assert_eq!(sp.digits(&limits()).unwrap(), "2401");
    }

    #[test]
    fn eval_rejects_fractional_base() {
        let x0 = BigRational::new(int(1), int(2));
        let y0 = BigRational::new(int(1), int(3));
        // base value 1/4 + 1/2 + 1/3 = 13/12
        match koch_tutte(1, 1).eval(&x0, &y0) {
            Err(Error::NonIntegerBase { value }) => assert_eq!(value, "13/12"),
            other => panic!("expected NonIntegerBase, got {other:?}"),
        }
    }

    #[test]
    fn expand_small_forms() {
        let lim = limits();
        let zero_pow = PowerForm::new(triangle_poly(), int(0));
        assert_eq!(zero_pow.expand(&lim).unwrap(), BiPoly::one());

        let tri = koch_tutte(1, 0).expand(&lim).unwrap();
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri, oracle::tutte_subgraph_sum(&g, &lim).unwrap());

        // same exponent, same base, same expansion
        assert_eq!(
            exp_tutte(1).expand(&lim).unwrap(),
            koch_tutte(1, 1).expand(&lim).unwrap()
        );
    }

    #[test]
    fn expand_budgets() {
        let lim = limits();
        // 4^40 = 2^80 does not fit the u64 expansion machinery
        match koch_tutte(1, 40).expand(&lim) {
            Err(Error::ExponentTooLarge { .. }) => {}
            other => panic!("expected ExponentTooLarge, got {other:?}"),
        }
        // 4^15 fits u64 but the expanded table would be ~4.6e18 cells
        match koch_tutte(1, 15).expand(&lim) {
            Err(Error::ExpansionTooLarge { .. }) => {}
            other => panic!("expected ExpansionTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn digit_rendering_budget() {
        let lim = limits();
        let big = CountForm::new(int(3), BigInt::from(10_000_000u64));
        match big.digits(&lim) {
            Err(Error::RenderTooLarge { .. }) => {}
            other => panic!("expected RenderTooLarge, got {other:?}"),
        }
        // degenerate bases are exact at any exponent
        let huge = BigInt::from(u128::MAX);
        assert_eq!(
            CountForm::new(int(0), huge.clone()).digits(&lim).unwrap(),
            "0"
        );
        assert_eq!(
            CountForm::new(int(1), huge.clone()).digits(&lim).unwrap(),
            "1"
        );
        assert_eq!(
            CountForm::new(int(-1), huge.clone()).digits(&lim).unwrap(),
            "-1"
        );
        assert_eq!(CountForm::new(int(-1), huge * 2).digits(&lim).unwrap(), "1");
        assert_eq!(CountForm::new(int(5), int(0)).digits(&lim).unwrap(), "1");
        assert_eq!(
            CountForm::new(int(-2), int(3)).to_integer(&lim).unwrap(),
            int(-8)
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(koch_tutte(1, 1).to_string(), "(x^2 + x + y)^4");
        assert_eq!(koch_tutte(1, 0).to_string(), "x^2 + x + y");
        assert_eq!(PowerForm::new(triangle_poly(), int(0)).to_string(), "1");
        assert_eq!(CountForm::new(int(3), int(4)).to_string(), "3^4");
        assert_eq!(CountForm::new(int(7), int(1)).to_string(), "7");
        assert_eq!(CountForm::new(int(-2), int(3)).to_string(), "(-2)^3");
    }

    #[test]
    fn json_round_trips() {
        let pf = koch_tutte(2, 3);
        assert_eq!(PowerForm::from_json(&pf.to_json()).unwrap(), pf);
        let cf = CountForm::new(int(7), int(364));
        assert_eq!(CountForm::from_json(&cf.to_json()).unwrap(), cf);

        let bad: Value = serde_json::from_str(r#"{"base":"3","exponent":"-1"}"#).unwrap();
        assert!(CountForm::from_json(&bad).is_err());
        let bad: Value = serde_json::from_str(r#"{"exponent":"4"}"#).unwrap();
        assert!(PowerForm::from_json(&bad).is_err());
    }

    #[test]
    fn chromatic_and_reliability_powers() {
        let lim = limits();
        let tri_chrom = triangle_power_chromatic(&int(1), &lim).unwrap();
        assert_eq!(
            tri_chrom,
            UniPoly::from_terms(PolyVar::Lambda, [(3, rat(1)), (2, rat(-3)), (1, rat(2))])
        );

        // generation-1 Koch network: brute 3-coloring count matches
        let g = crate::graph::koch_graph(1, 1, &lim).unwrap();
        let chrom = triangle_power_chromatic(koch_tutte(1, 1).exponent(), &lim).unwrap();
        let at3 = chrom.eval(&rat(3));
        assert_eq!(at3, rat(48));
        assert_eq!(oracle::coloring_count_brute(&g, 3, &lim).unwrap(), int(48));

        let tri_rel = triangle_power_reliability(&int(1), &lim).unwrap();
        let g3 = MultiGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri_rel, oracle::reliability_brute(&g3, &lim).unwrap());
        let rel = triangle_power_reliability(koch_tutte(1, 1).exponent(), &lim).unwrap();
        assert_eq!(rel, oracle::reliability_brute(&g, &lim).unwrap());
        assert_eq!(rel.eval(&rat(1)), rat(1));

        // exponent 0 degenerates to the single-vertex invariants
        assert_eq!(
            triangle_power_chromatic(&int(0), &lim).unwrap(),
            UniPoly::monomial(PolyVar::Lambda, 1, rat(1))
        );
        assert_eq!(
            triangle_power_reliability(&int(0), &lim).unwrap(),
            UniPoly::constant(PolyVar::P, rat(1))
        );
    }

    #[test]
    fn potts_matches_subset_sums() {
        let lim = limits();
        let tutte_of = |g: &MultiGraph| {
            let t = oracle::tutte_subgraph_sum(g, &lim).unwrap();
            move |x0: &BigRational, y0: &BigRational| Ok(t.eval(x0, y0))
        };

        let triangle = MultiGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let z = potts_partition(tutte_of(&triangle), 1, 3, &rat(2), &rat(1)).unwrap();
        assert_eq!(z, rat(28));

        let edge = MultiGraph::new(2, vec![(0, 1)]).unwrap();
        let z = potts_partition(tutte_of(&edge), 1, 2, &rat(3), &rat(1)).unwrap();
        assert_eq!(z, rat(12));

        // q = 1 means every subset contributes v^|A|
        let path = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let v = BigRational::new(int(5), int(3));
        let z = potts_partition(tutte_of(&path), 1, 4, &rat(1), &v).unwrap();
        let expected = rational_pow(&(&v + rat(1)), 3);
        assert_eq!(z, expected);

        // rational q and v against the brute enumerator
        let q = BigRational::new(int(-7), int(2));
        let v = BigRational::new(int(3), int(5));
        let z = potts_partition(tutte_of(&path), 1, 4, &q, &v).unwrap();
        assert_eq!(z, oracle::potts_sum_brute(&path, &q, &v, &lim).unwrap());
    }

    #[test]
    fn potts_rejects_zero_weight() {
        match potts_partition(|_, _| Ok(rat(1)), 1, 3, &rat(2), &rat(0)) {
            Err(Error::ZeroPottsWeight) => {}
            other => panic!("expected ZeroPottsWeight, got {other:?}"),
        }
    }
}
