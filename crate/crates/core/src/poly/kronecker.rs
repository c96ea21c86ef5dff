//! Multiplication kernels shared by the polynomial types.
//!
//! Exponent pairs are mapped onto a single slot index so the same code
//! serves bivariate and univariate callers (the latter pass degY = 0).
//! Three strategies, picked by operand shape:
//!
//! * tiny or sparse products: accumulation into a map;
//! * small dense products: accumulation into a flat buffer;
//! * large dense products: pack each operand into one big integer with
//!   fixed-width coefficient slots and let integer multiplication do the
//!   convolution (Kronecker substitution). Exact, and far faster than
//!   pairwise coefficient multiplication once operands reach tens of
//!   thousands of terms.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

type Key = (u32, u32);
type TermMap = BTreeMap<Key, BigInt>;

/// Pair count above which packing pays for itself.
const KRONECKER_PAIR_THRESHOLD: u128 = 1 << 16;
/// Largest flat buffer used by the dense schoolbook path.
const DENSE_SLOT_LIMIT: u128 = 1 << 20;

pub(crate) fn mul_term_maps(a: &TermMap, b: &TermMap) -> TermMap {
    if a.is_empty() || b.is_empty() {
        return TermMap::new();
    }
    let (dxa, dya) = max_degrees(a);
    let (dxb, dyb) = max_degrees(b);
    let stride = (dya + dyb + 1) as u128;
    let slots = (dxa + dxb + 1) as u128 * stride;
    let pairs = a.len() as u128 * b.len() as u128;

    if pairs >= KRONECKER_PAIR_THRESHOLD && slots <= pairs {
        kronecker(a, b, (dya + dyb + 1) as usize, slots as usize)
    } else if slots <= DENSE_SLOT_LIMIT {
        dense_schoolbook(a, b, (dya + dyb + 1) as usize, slots as usize)
    } else {
        map_schoolbook(a, b)
    }
}

fn max_degrees(m: &TermMap) -> (u64, u64) {
    let mut dx = 0;
    let mut dy = 0;
    for &(x, y) in m.keys() {
        dx = dx.max(x as u64);
        dy = dy.max(y as u64);
    }
    (dx, dy)
}

fn map_schoolbook(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (&(xa, ya), ca) in a {
        for (&(xb, yb), cb) in b {
            let entry = out.entry((xa + xb, ya + yb)).or_insert_with(BigInt::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn dense_schoolbook(a: &TermMap, b: &TermMap, stride: usize, slots: usize) -> TermMap {
    let mut buf = vec![BigInt::zero(); slots];
    for (&(xa, ya), ca) in a {
        for (&(xb, yb), cb) in b {
            let idx = (xa + xb) as usize * stride + (ya + yb) as usize;
            buf[idx] += ca * cb;
        }
    }
    harvest(buf, stride)
}

fn harvest(buf: Vec<BigInt>, stride: usize) -> TermMap {
    let mut out = TermMap::new();
    for (idx, c) in buf.into_iter().enumerate() {
        if !c.is_zero() {
            out.insert(((idx / stride) as u32, (idx % stride) as u32), c);
        }
    }
    out
}

/// Slot-packed multiplication. Operands are split into positive and
/// negative parts so each packed integer has nonnegative slot values; the
/// up to four cross products are signed back together during unpacking.
fn kronecker(a: &TermMap, b: &TermMap, stride: usize, slots: usize) -> TermMap {
    let bits_a = max_coeff_bits(a);
    let bits_b = max_coeff_bits(b);
    let overlap = a.len().min(b.len()) as u64;
    let slot_bits = bits_a + bits_b + ceil_log2(overlap) + 1;
    // Whole 32-bit words per slot, so packing is pure word copying.
    let words = slot_bits.div_ceil(32).max(1) as usize;

    let (a_pos, a_neg) = split_by_sign(a, stride);
    let (b_pos, b_neg) = split_by_sign(b, stride);

    let mut buf = vec![BigInt::zero(); slots];
    for (xs, ys, negate) in [
        (&a_pos, &b_pos, false),
        (&a_neg, &b_neg, false),
        (&a_pos, &b_neg, true),
        (&a_neg, &b_pos, true),
    ] {
        if xs.is_empty() || ys.is_empty() {
            continue;
        }
        let product = pack(xs, words, slots) * pack(ys, words, slots);
        unpack_into(&mut buf, &product, words, negate);
    }
    harvest(buf, stride)
}

fn max_coeff_bits(m: &TermMap) -> u64 {
    m.values().map(|c| c.magnitude().bits()).max().unwrap_or(1)
}

fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    }
}

/// Slot-indexed magnitudes of one sign class.
type SlotMags = Vec<(usize, BigUint)>;

fn split_by_sign(m: &TermMap, stride: usize) -> (SlotMags, SlotMags) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (&(x, y), c) in m {
        let slot = x as usize * stride + y as usize;
        match c.sign() {
            Sign::Plus => pos.push((slot, c.magnitude().clone())),
            Sign::Minus => neg.push((slot, c.magnitude().clone())),
            Sign::NoSign => {}
        }
    }
    (pos, neg)
}

fn pack(terms: &[(usize, BigUint)], words: usize, slots: usize) -> BigUint {
    let mut digits = vec![0u32; slots * words];
    for (slot, mag) in terms {
        let d = mag.to_u32_digits();
        digits[slot * words..slot * words + d.len()].copy_from_slice(&d);
    }
    BigUint::new(digits)
}

fn unpack_into(buf: &mut [BigInt], product: &BigUint, words: usize, negate: bool) {
    let digits = product.to_u32_digits();
    for (slot, acc) in buf.iter_mut().enumerate() {
        let lo = slot * words;
        if lo >= digits.len() {
            break;
        }
        let hi = (lo + words).min(digits.len());
        let mag = BigUint::from_slice(&digits[lo..hi]);
        if mag.is_zero() {
            continue;
        }
        let v = BigInt::from_biguint(Sign::Plus, mag);
        if negate {
            *acc -= v;
        } else {
            *acc += v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, u32, i64)]) -> TermMap {
        let mut m = TermMap::new();
        for &(x, y, c) in terms {
            *m.entry((x, y)).or_insert_with(BigInt::zero) += BigInt::from(c);
        }
        m.retain(|_, c| !c.is_zero());
        m
    }

    #[test]
    fn schoolbook_matches_by_hand() {
        // (x + y)(x - y) = x^2 - y^2
        let p = mul_term_maps(
            &poly(&[(1, 0, 1), (0, 1, 1)]),
            &poly(&[(1, 0, 1), (0, 1, -1)]),
        );
        assert_eq!(p, poly(&[(2, 0, 1), (0, 2, -1)]));
    }

    #[test]
    fn kronecker_agrees_with_schoolbook() {
        // Dense random-ish operands big enough to cross the packing threshold.
        let mut a = TermMap::new();
        let mut b = TermMap::new();
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for x in 0..20u32 {
            for y in 0..16u32 {
                a.insert((x, y), BigInt::from(next() as i64 >> 16));
                b.insert((x, y), BigInt::from(next() as i64 >> 16));
            }
        }
        let fast = kronecker(&a, &b, 31, 39 * 31);
        let slow = map_schoolbook(&a, &b);
        assert_eq!(fast, slow);
    }

    #[test]
    fn empty_operand_gives_empty_product() {
        assert!(mul_term_maps(&TermMap::new(), &poly(&[(1, 0, 1)])).is_empty());
    }
}
