//! Fast routes for the Farey family.
//!
//! The Tutte polynomial of a Farey graph splits over its two newest-edge
//! endpoints into a pair (t1, n) that obeys a closed quadratic recursion:
//!
//! ```text
//! n'  = 2 t1 n + (x-1) n^2
//! t1' = y t1^2 + n'
//! T   = t1 + (x-1) n
//! ```
//!
//! starting from t1 = n = 1 at generation 0 (a single edge, T = x). One
//! step doubles the generation's graph, so generation n costs n polynomial
//! squarings instead of anything exponential in the graph size. Everything
//! else in this module is a specialisation of that recursion: evaluation
//! at a point runs the same update on rationals, and the univariate closed
//! forms below collapse the recursion further.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{rational_pow, BiPoly, PolyVar, UniPoly};
use crate::{Error, Limits, Result};

/// The two-component state of the Farey recursion at some generation.
///
/// `t1` collects spanning subgraphs keeping the newest edge's endpoints
/// connected; `n_part` carries the disconnected class with one factor of
/// (x-1) divided out, which is what keeps the recursion division-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareySplit {
    pub t1: BiPoly,
    pub n_part: BiPoly,
    pub generation: u32,
}

impl FareySplit {
    /// Full Tutte polynomial: t1 + (x-1)·n_part.
    pub fn tutte(&self) -> BiPoly {
        self.t1.add(&mul_x_minus_one(&self.n_part))
    }

    /// The disconnected-class summand: (x-1)·n_part.
    pub fn t2(&self) -> BiPoly {
        mul_x_minus_one(&self.n_part)
    }
}

/// Same state evaluated at a fixed rational point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareySplitValue {
    pub t1: BigRational,
    pub n_part: BigRational,
    pub generation: u32,
}

impl FareySplitValue {
    pub fn tutte(&self, x0: &BigRational) -> BigRational {
        &self.t1 + (x0 - BigRational::one()) * &self.n_part
    }
}

fn mul_x_minus_one(p: &BiPoly) -> BiPoly {
    p.shift(1, 0).sub(p)
}

/// Runs the recursion symbolically up to generation n. Term counts grow
/// roughly as 4^n, hence the budget.
pub fn split(n: u32, limits: &Limits) -> Result<FareySplit> {
    if n > limits.poly_generation_cap {
        return Err(Error::GenerationCapExceeded {
            n,
            cap: limits.poly_generation_cap,
        });
    }
    // Every coefficient of t1 and n is nonnegative and bounded by the
    // all-subgraph count T(2,2) = 2^(2^(g+1)-1), which stays below 2^63
    // through generation 5. Small dense i128 grids are exact there and far
    // cheaper than sparse maps over heap integers; later generations keep
    // the map representation, where Kronecker multiplication takes over.
    let dense_steps = n.min(5);
    let mut t1g = Grid::one();
    let mut ng = Grid::one();
    for _ in 0..dense_steps {
        let cross = t1g.mul(&ng);
        let n_sq = ng.mul(&ng);
        let t1_sq = t1g.mul(&t1g);
        let mut next_n = Grid::zeros(cross.dx.max(n_sq.dx + 1), cross.dy.max(n_sq.dy));
        next_n.acc(&cross, 0, 0, 2);
        next_n.acc(&n_sq, 1, 0, 1);
        next_n.acc(&n_sq, 0, 0, -1);
        let mut next_t1 = Grid::zeros(t1_sq.dx.max(next_n.dx), (t1_sq.dy + 1).max(next_n.dy));
        next_t1.acc(&t1_sq, 0, 1, 1);
        next_t1.acc(&next_n, 0, 0, 1);
        ng = next_n;
        t1g = next_t1;
    }
    let mut t1 = t1g.to_bipoly();
    let mut n_part = ng.to_bipoly();
    for _ in dense_steps..n {
        let cross = t1.mul(&n_part);
        let n_sq = n_part.mul(&n_part);
        let t1_sq = t1.mul(&t1);
        n_part = cross
            .mul_scalar(&BigInt::from(2))
            .add(&mul_x_minus_one(&n_sq));
        t1 = t1_sq.shift(0, 1).add(&n_part);
    }
    Ok(FareySplit {
        t1,
        n_part,
        generation: n,
    })
}

/// Dense row-major coefficient grid over (deg_x, deg_y); see `split` for
/// the range argument that makes i128 entries exact.
struct Grid {
    dx: usize,
    dy: usize,
    c: Vec<i128>,
}

impl Grid {
    fn one() -> Grid {
        Grid {
            dx: 0,
            dy: 0,
            c: vec![1],
        }
    }

    fn zeros(dx: usize, dy: usize) -> Grid {
        Grid {
            dx,
            dy,
            c: vec![0; (dx + 1) * (dy + 1)],
        }
    }

    fn at(&self, i: usize, j: usize) -> i128 {
        self.c[i * (self.dy + 1) + j]
    }

    fn mul(&self, other: &Grid) -> Grid {
        let mut out = Grid::zeros(self.dx + other.dx, self.dy + other.dy);
        let w = out.dy + 1;
        for i in 0..=self.dx {
            for j in 0..=self.dy {
                let a = self.at(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..=other.dx {
                    let row = (i + k) * w + j;
                    for l in 0..=other.dy {
                        out.c[row + l] += a * other.at(k, l);
                    }
                }
            }
        }
        out
    }

    /// self += factor · other shifted by (sx, sy).
    fn acc(&mut self, other: &Grid, sx: usize, sy: usize, factor: i128) {
        let w = self.dy + 1;
        for i in 0..=other.dx {
            for j in 0..=other.dy {
                self.c[(i + sx) * w + (j + sy)] += factor * other.at(i, j);
            }
        }
    }

    fn to_bipoly(&self) -> BiPoly {
        let mut terms = Vec::new();
        for i in 0..=self.dx {
            for j in 0..=self.dy {
                let v = self.at(i, j);
                if v != 0 {
                    terms.push((i as u32, j as u32, v));
                }
            }
        }
        BiPoly::from_terms(terms)
    }
}

/// Tutte polynomial of the generation-n Farey graph.
pub fn tutte(n: u32, limits: &Limits) -> Result<BiPoly> {
    Ok(split(n, limits)?.tutte())
}

/// The recursion over rationals: exact evaluation of the split at (x0, y0)
/// in n steps. Values are doubly exponential in n, so memory (not time
/// complexity) is the practical bound; n around 40 already produces
/// numbers of astronomical bit length.
pub fn eval_split(n: u32, x0: &BigRational, y0: &BigRational) -> FareySplitValue {
    let one = BigRational::one();
    let xm1 = x0 - &one;
    let mut t1 = one.clone();
    let mut n_part = one;
    for _ in 0..n {
        let next_n = BigRational::from(BigInt::from(2)) * &t1 * &n_part + &xm1 * &n_part * &n_part;
        t1 = y0 * &t1 * &t1 + &next_n;
        n_part = next_n;
    }
    FareySplitValue {
        t1,
        n_part,
        generation: n,
    }
}

/// Tutte polynomial of the generation-n Farey graph evaluated at (x0, y0).
pub fn eval(n: u32, x0: &BigRational, y0: &BigRational) -> BigRational {
    eval_split(n, x0, y0).tutte(x0)
}

/// Number of spanning trees: (2^(n+1) - 1) · prod_{i=2..n} (2^i - 1)^(2^(n-i)),
/// evaluated by repeated squaring so no huge exponent is ever formed.
pub fn nst(n: u32) -> BigInt {
    let mut q = BigInt::one();
    for i in 2..=n {
        q = &q * &q * ((BigInt::one() << i) - 1);
    }
    ((BigInt::one() << (n + 1)) - 1) * q
}

/// Number of connected spanning subgraphs:
/// 2^(2^n - 1) · (n+1) · prod_{i=2..n} i^(2^(n-i)).
pub fn ncssg(n: u32) -> BigInt {
    assert!(n < 64, "count would not fit in memory");
    let mut q = BigInt::one();
    for i in 2..=n {
        q = &q * &q * BigInt::from(i);
    }
    let shift = usize::try_from((1u128 << n) - 1).expect("count too large to represent");
    ((BigInt::one() << shift) * (n + 1)) * q
}

/// The cyclotomic-style factor (2^i - y^i) / (2 - y) =
/// 2^(i-1) + 2^(i-2) y + ... + y^(i-1).
fn reduced_factor(i: u32) -> UniPoly {
    UniPoly::from_terms(
        PolyVar::Y,
        (0..i).map(|k| (k, BigRational::from(BigInt::one() << (i - 1 - k)))),
    )
}

/// T_n(1, y) as a polynomial in y, via the closed product form with every
/// (2 - y) content cancelled symbolically. Nothing is singular at y = 2:
/// the generating identity divides each factor (2^i - y^i) by (2 - y)
/// exactly, and the apparent denominator (2 - y)^(2^(n-1)) is consumed in
/// full by those cancellations.
pub fn t1y(n: u32) -> UniPoly {
    let mut q = UniPoly::constant(PolyVar::Y, BigRational::one());
    for i in 2..=n {
        q = q.mul(&q).mul(&reduced_factor(i));
    }
    q.mul(&reduced_factor(n + 1))
}

/// The ratio a_n(1, y0) = T_n(1, y0) / T_{n-1}(1, y0)^2 in closed form:
/// 2(n+1)/n at y0 = 2, (2^(n+1) - y0^(n+1)) / (2^n - y0^n) elsewhere.
/// Undefined where the denominator vanishes (y0 = -2 with even n).
pub fn ratio(n: u32, y0: &BigRational) -> Result<BigRational> {
    assert!(n >= 1, "ratio is defined from generation 1");
    let two = BigRational::from(BigInt::from(2));
    if *y0 == two {
        return Ok(BigRational::new(BigInt::from(2) * (n + 1), BigInt::from(n)));
    }
    let num = rational_pow(&two, n + 1) - rational_pow(y0, n + 1);
    let den = rational_pow(&two, n) - rational_pow(y0, n);
    if den.is_zero() {
        return Err(Error::UndefinedAt {
            what: "farey ratio",
        });
    }
    Ok(num / den)
}

/// Chromatic polynomial of the generation-n Farey graph:
/// ±λ(1-λ)(2-λ)^(2^n - 1), the sign chosen so the result is the genuine
/// coloring-counting polynomial (monic, degree 2^n + 1). Generation 0 is
/// the one case where the rank is odd and the sign flips.
pub fn chromatic(n: u32) -> UniPoly {
    assert!(n < 64, "polynomial would not fit in memory");
    let two_minus = UniPoly::from_terms(
        PolyVar::Lambda,
        [
            (0, BigRational::from(BigInt::from(2))),
            (1, -BigRational::one()),
        ],
    );
    let one_minus = UniPoly::from_terms(
        PolyVar::Lambda,
        [(0, BigRational::one()), (1, -BigRational::one())],
    );
    let power = two_minus.pow((1u64 << n) - 1);
    let mut p = one_minus.mul(&power).shift(1);
    if n == 0 {
        p = p.scale(&(-BigRational::one()));
    }
    p
}

/// Tutte polynomial at y = 0 in closed form: x(x+1)^(2^n - 1).
pub fn t_x0(n: u32) -> BiPoly {
    assert!(n < 64, "polynomial would not fit in memory");
    let x_plus_one = BiPoly::from_terms([(1, 0, 1), (0, 0, 1)]);
    x_plus_one.pow_unchecked((1u64 << n) - 1).shift(1, 0)
}

/// All-terminal reliability polynomial R(G_n; p), exact in p.
///
/// Computed through the generic specialisation chain rather than any
/// singular printed form: take T_n(1, y), reverse it against the cycle
/// rank (q^nullity · T(1, 1/q)), substitute q := 1 - p, and scale by
/// p^rank. All three steps are polynomial and exact everywhere.
pub fn reliability(n: u32) -> UniPoly {
    assert!(n < 32, "polynomial would not fit in memory");
    let nullity = (1u64 << n) - 1;
    let rank = 1u32 << n;
    let w = t1y(n)
        .reciprocal_transform(nullity as u32)
        .expect("degree in y equals the cycle rank by construction");
    w.substitute_affine(&BigRational::one(), &(-BigRational::one()), PolyVar::P)
        .shift(rank)
}

/// The product form of the reliability polynomial evaluated directly at a
/// rational p, with q = 1 - p:
/// q^(2^n - 1) p^(2^n) (2^(n+1) - q^-(n+1)) / (2 - q^-1)^(2^(n-1))
/// · prod_{i=2..n} (2^i - q^-i)^(2^(n-i)).
/// Undefined at q = 0 and at the q = 1/2 pole; use [`reliability`] for a
/// representation without those artifacts.
pub fn reliability_direct_eval(n: u32, p0: &BigRational) -> Result<BigRational> {
    assert!(n >= 1, "direct product form starts at generation 1");
    let one = BigRational::one();
    let two = BigRational::from(BigInt::from(2));
    let q = &one - p0;
    if q.is_zero() {
        return Err(Error::UndefinedAt {
            what: "reliability product form",
        });
    }
    let q_inv = q.recip();
    let half_pole = &two - &q_inv;
    if half_pole.is_zero() {
        return Err(Error::UndefinedAt {
            what: "reliability product form",
        });
    }
    // q^(2^n - 1) · p^(2^n) = (q p)^(2^n) / q
    let prefix = pow_by_squaring(&(&q * p0), n) * &q_inv;
    let head = rational_pow(&two, n + 1) - rational_pow(&q_inv, n + 1);
    let denom = pow_by_squaring(&half_pole, n - 1);
    let mut tail = BigRational::one();
    for i in 2..=n {
        tail = &tail * &tail * (rational_pow(&two, i) - rational_pow(&q_inv, i));
    }
    Ok(prefix * head / denom * tail)
}

/// r^(2^k) by k squarings.
fn pow_by_squaring(r: &BigRational, k: u32) -> BigRational {
    let mut acc = r.clone();
    for _ in 0..k {
        acc = &acc * &acc;
    }
    acc
}
