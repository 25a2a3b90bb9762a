use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::geom::Point;
use crate::scalar::Coord;

/// Rational point `(x / d, y / d)` with `d > 0`, not reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct QPoint<R> {
    pub x: R,
    pub y: R,
    pub d: R,
}

pub(crate) fn mul<R: Coord>(a: &R, b: &R) -> R {
    a.clone() * b.clone()
}

pub(crate) fn sub<R: Coord>(a: &R, b: &R) -> R {
    a.clone() - b.clone()
}

pub(crate) fn add<R: Coord>(a: &R, b: &R) -> R {
    a.clone() + b.clone()
}

/// `u x v` for integer vectors.
pub(crate) fn cross<R: Coord>(ux: &R, uy: &R, vx: &R, vy: &R) -> R {
    sub(&mul(ux, vy), &mul(uy, vx))
}

impl<R: Coord> QPoint<R> {
    pub fn from_int(p: &Point<R>) -> Self {
        QPoint {
            x: p.x.clone(),
            y: p.y.clone(),
            d: R::one(),
        }
    }

    pub fn cmp_y(&self, other: &QPoint<R>) -> Ordering {
        mul(&self.y, &other.d).cmp(&mul(&other.y, &self.d))
    }

    pub fn to_rational(&self) -> Point<BigRational> {
        let d = self.d.big();
        Point::new(
            BigRational::new(self.x.big(), d.clone()),
            BigRational::new(self.y.big(), d),
        )
    }

    /// Point `a + t (b - a)` for `t = num / den`, `den > 0`.
    pub fn along(a: &Point<R>, b: &Point<R>, num: &R, den: &R) -> Self {
        QPoint {
            x: add(&mul(&a.x, den), &mul(num, &sub(&b.x, &a.x))),
            y: add(&mul(&a.y, den), &mul(num, &sub(&b.y, &a.y))),
            d: den.clone(),
        }
    }
}

/// Sign of `(s1 - s0) x (q - s0)` for integer `s0`, `s1`.
pub(crate) fn orient_q<R: Coord>(s0: &Point<R>, s1: &Point<R>, q: &QPoint<R>) -> Ordering {
    let ux = sub(&s1.x, &s0.x);
    let uy = sub(&s1.y, &s0.y);
    let vx = sub(&q.x, &mul(&s0.x, &q.d));
    let vy = sub(&q.y, &mul(&s0.y, &q.d));
    mul(&ux, &vy).cmp(&mul(&uy, &vx))
}

/// Parameter `t` along `pq` of its crossing with the line through `rs`, as
/// `(num, den)` with `den > 0`. The segments must not be parallel.
pub(crate) fn crossing_param<R: Coord>(
    p: &Point<R>,
    q: &Point<R>,
    r: &Point<R>,
    s: &Point<R>,
) -> (R, R) {
    let ex = sub(&q.x, &p.x);
    let ey = sub(&q.y, &p.y);
    let fx = sub(&s.x, &r.x);
    let fy = sub(&s.y, &r.y);
    let den = cross(&ex, &ey, &fx, &fy);
    let num = cross(&sub(&r.x, &p.x), &sub(&r.y, &p.y), &fx, &fy);
    if den.is_negative() {
        (-num, -den)
    } else {
        (num, den)
    }
}

pub(crate) fn cmp_frac<R: Coord>(a: &(R, R), b: &(R, R)) -> Ordering {
    mul(&a.0, &b.1).cmp(&mul(&b.0, &a.1))
}

/// Midpoint of two parameters.
pub(crate) fn mid_frac<R: Coord>(a: &(R, R), b: &(R, R)) -> (R, R) {
    let two = R::one() + R::one();
    (
        add(&mul(&a.0, &b.1), &mul(&b.0, &a.1)),
        mul(&two, &mul(&a.1, &b.1)),
    )
}

pub(crate) fn rational_of(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}
