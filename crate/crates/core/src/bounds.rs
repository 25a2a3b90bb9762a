//! Thresholds where the number of obstacle representations drops below the
//! number of labeled graphs, evaluated with exact integers.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("obstacle count must be at least 1")]
    ZeroObstacles,
    #[error("total side count must be at least 3, got {0}")]
    TooFewSides(u64),
    #[error("constant must be positive, got {0}")]
    NonPositiveConstant(BigRational),
    #[error("constant {0} is too large")]
    ConstantTooLarge(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundsQuery {
    /// At most `h` convex obstacles: `2 h n log2(2n) < C(n, 2)`.
    Obstacles { h: u64 },
    /// Obstacles with `s` sides in total and the supplied constant `c`:
    /// `c (n + s) log2(n + s) < C(n, 2)`.
    Sides { s: u64, c: BigRational },
}

fn pair_count(n: u64) -> u64 {
    n * (n.saturating_sub(1)) / 2
}

/// `(2n)^(2hn) < 2^C(n,2)`.
pub fn obstacles_inequality(h: u64, n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let lhs = BigUint::from(2 * n).pow((2 * h * n) as u32);
    lhs < BigUint::one() << pair_count(n)
}

/// `N^(pN) < 2^(q C(n,2))` with `N = n + s`, `c = p / q`.
pub fn sides_inequality(s: u64, p: u64, q: u64, n: u64) -> bool {
    let big_n = n + s;
    let lhs = BigUint::from(big_n).pow((p * big_n) as u32);
    lhs < BigUint::one() << (q * pair_count(n))
}

/// Smallest `n` satisfying the query's inequality.
pub fn bounds_threshold(q: &BoundsQuery) -> Result<u64, BoundsError> {
    match q {
        BoundsQuery::Obstacles { h } => {
            if *h == 0 {
                return Err(BoundsError::ZeroObstacles);
            }
            Ok((1..)
                .find(|&n| obstacles_inequality(*h, n))
                .expect("eventually holds"))
        }
        BoundsQuery::Sides { s, c } => {
            if *s < 3 {
                return Err(BoundsError::TooFewSides(*s));
            }
            if !c.is_positive() {
                return Err(BoundsError::NonPositiveConstant(c.clone()));
            }
            let (p, qd) = match (c.numer().to_u64(), c.denom().to_u64()) {
                (Some(p), Some(q)) if p <= 1 << 20 && q <= 1 << 20 => (p, q),
                _ => return Err(BoundsError::ConstantTooLarge(c.clone())),
            };
            Ok((1..)
                .find(|&n| sides_inequality(*s, p, qd, n))
                .expect("eventually holds"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn one_obstacle() {
        assert_eq!(bounds_threshold(&BoundsQuery::Obstacles { h: 1 }), Ok(24));
        assert!(!obstacles_inequality(1, 23));
    }

    #[test]
    fn monotone_in_h() {
        let t: Vec<u64> = (1..=5)
            .map(|h| bounds_threshold(&BoundsQuery::Obstacles { h }).unwrap())
            .collect();
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sides_mode() {
        let n = bounds_threshold(&BoundsQuery::Sides { s: 3, c: rat(1, 1) }).unwrap();
        assert!(sides_inequality(3, 1, 1, n));
        assert!(!sides_inequality(3, 1, 1, n - 1));
        let half = bounds_threshold(&BoundsQuery::Sides { s: 3, c: rat(1, 2) }).unwrap();
        assert!(half <= n);
        assert!(bounds_threshold(&BoundsQuery::Sides { s: 2, c: rat(1, 1) }).is_err());
        assert!(bounds_threshold(&BoundsQuery::Sides { s: 3, c: rat(0, 1) }).is_err());
        assert!(bounds_threshold(&BoundsQuery::Obstacles { h: 0 }).is_err());
    }
}
