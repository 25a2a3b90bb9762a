//! Exact integer scalars used for every coordinate in the crate.
//!
//! Nothing here is floating point. Small machine integers are widened when a
//! predicate needs more bits than the input type carries, and fall back to
//! [`BigInt`] when even `i128` would overflow.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// An exact, signed integer coordinate type.
pub trait Coord:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Send
    + Sync
    + 'static
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + ToBigInt
    + FromStr
{
    /// Sign of the cross product `(b - a) x (c - a)`, never overflowing.
    fn det_sign(ax: &Self, ay: &Self, bx: &Self, by: &Self, cx: &Self, cy: &Self) -> Ordering;

    /// Narrowing conversion; `None` when the value does not fit.
    fn from_bigint(v: &BigInt) -> Option<Self>;

    fn big(&self) -> BigInt {
        self.to_bigint().expect("integer scalar converts to BigInt")
    }
}

fn det_sign_big(a: [BigInt; 6]) -> Ordering {
    let [ax, ay, bx, by, cx, cy] = a;
    let lhs = (&bx - &ax) * (&cy - &ay);
    let rhs = (&by - &ay) * (&cx - &ax);
    lhs.cmp(&rhs)
}

fn det_sign_i128(ax: i128, ay: i128, bx: i128, by: i128, cx: i128, cy: i128) -> Option<Ordering> {
    let ux = bx.checked_sub(ax)?;
    let uy = by.checked_sub(ay)?;
    let vx = cx.checked_sub(ax)?;
    let vy = cy.checked_sub(ay)?;
    let lhs = ux.checked_mul(vy)?;
    let rhs = uy.checked_mul(vx)?;
    Some(lhs.cmp(&rhs))
}

impl Coord for i32 {
    fn det_sign(ax: &Self, ay: &Self, bx: &Self, by: &Self, cx: &Self, cy: &Self) -> Ordering {
        // 33-bit differences, 66-bit products: always fits.
        det_sign_i128(
            *ax as i128,
            *ay as i128,
            *bx as i128,
            *by as i128,
            *cx as i128,
            *cy as i128,
        )
        .expect("i32 determinant fits in i128")
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i32()
    }
}

impl Coord for i64 {
    fn det_sign(ax: &Self, ay: &Self, bx: &Self, by: &Self, cx: &Self, cy: &Self) -> Ordering {
        det_sign_i128(
            *ax as i128,
            *ay as i128,
            *bx as i128,
            *by as i128,
            *cx as i128,
            *cy as i128,
        )
        .unwrap_or_else(|| det_sign_big([ax, ay, bx, by, cx, cy].map(|v| BigInt::from(*v))))
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

impl Coord for i128 {
    fn det_sign(ax: &Self, ay: &Self, bx: &Self, by: &Self, cx: &Self, cy: &Self) -> Ordering {
        det_sign_i128(*ax, *ay, *bx, *by, *cx, *cy)
            .unwrap_or_else(|| det_sign_big([ax, ay, bx, by, cx, cy].map(|v| BigInt::from(*v))))
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

impl Coord for BigInt {
    fn det_sign(ax: &Self, ay: &Self, bx: &Self, by: &Self, cx: &Self, cy: &Self) -> Ordering {
        let lhs = (bx - ax) * (cy - ay);
        let rhs = (by - ay) * (cx - ax);
        lhs.cmp(&rhs)
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn big(&self) -> BigInt {
        self.clone()
    }
}

/// Converts between coordinate types, failing if the value does not fit.
pub fn convert<A: Coord, B: Coord>(v: &A) -> Option<B> {
    B::from_bigint(&v.big())
}

/// Number of bits needed for `|v|`.
pub fn magnitude_bits<T: Coord>(v: &T) -> u64 {
    let b = v.big();
    if b.is_zero() {
        0
    } else {
        b.bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i64_extremes_do_not_overflow() {
        let m = i64::MAX;
        let n = i64::MIN;
        // (m - n) * (m - n) would overflow i128 in the product; falls back.
        assert_eq!(i64::det_sign(&n, &n, &m, &n, &n, &m), Ordering::Greater);
        assert_eq!(i64::det_sign(&n, &n, &n, &m, &m, &n), Ordering::Less);
        assert_eq!(i64::det_sign(&n, &n, &m, &m, &0, &0), Ordering::Equal);
    }

    #[test]
    fn conversions() {
        assert_eq!(convert::<i64, i32>(&5), Some(5));
        assert_eq!(convert::<i64, i32>(&(1 << 40)), None);
        assert_eq!(magnitude_bits(&-8i64), 4);
        assert_eq!(magnitude_bits(&0i64), 0);
    }
}
