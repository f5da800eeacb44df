use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Natural;
use crate::error::{Error, Result};

/// Nonnegative fraction in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    #[serde(with = "crate::report::decimal")]
    numerator: Natural,
    #[serde(with = "crate::report::decimal")]
    denominator: Natural,
}

impl Fraction {
    pub fn new(numerator: Natural, denominator: Natural) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        let g = numerator.gcd(&denominator);
        if g.is_zero() || g.is_one() {
            return Ok(Fraction { numerator, denominator });
        }
        Ok(Fraction { numerator: numerator / &g, denominator: denominator / g })
    }

    pub fn numerator(&self) -> &Natural {
        &self.numerator
    }

    pub fn denominator(&self) -> &Natural {
        &self.denominator
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// `|y·q − M·p|`, the distance `|y/M − p/q|` scaled by `M·q`.
fn scaled_gap(y: &BigUint, m: &BigUint, p: &BigUint, q: &BigUint) -> BigUint {
    let lhs = BigInt::from(y * q);
    let rhs = BigInt::from(m * p);
    (lhs - rhs).magnitude().clone()
}

/// Orders candidate `a` against `b` by distance to `y/M`, then denominator, then numerator.
fn closer(y: &BigUint, m: &BigUint, a: &(BigUint, BigUint), b: &(BigUint, BigUint)) -> Ordering {
    let da = scaled_gap(y, m, &a.0, &a.1) * &b.1;
    let db = scaled_gap(y, m, &b.0, &b.1) * &a.1;
    da.cmp(&db)
        .then_with(|| a.1.cmp(&b.1))
        .then_with(|| a.0.cmp(&b.0))
}

/// Fraction `p/q` with `q ≤ d_max` closest to `y/M`.
///
/// Ties go to the smaller denominator, then the smaller numerator. The answer
/// is always a convergent or a semiconvergent of the continued fraction of `y/M`.
pub fn best_rational_approx(y: &Natural, m: &Natural, d_max: &Natural) -> Result<Fraction> {
    if m.is_zero() || y >= m {
        return Err(Error::InvalidParams(format!("need 0 <= y < M, got y = {y}, M = {m}")));
    }
    if d_max.is_zero() {
        return Err(Error::InvalidParams("d_max must be at least 1".into()));
    }
    // (h_{k-1}, q_{k-1}) and (h_k, q_k), seeded with 1/0 and a_0/1 where a_0 = 0.
    let mut prev = (BigUint::one(), BigUint::zero());
    let mut cur = (BigUint::zero(), BigUint::one());
    let (mut num, mut den) = (y.clone(), m.clone());
    let best = loop {
        if num.is_zero() {
            // y/M is exactly the current convergent.
            break cur;
        }
        let (a, r) = den.div_rem(&num);
        den = num;
        num = r;
        let next_q = &a * &cur.1 + &prev.1;
        if &next_q > d_max {
            let t = (d_max - &prev.1) / &cur.1;
            let semi = (&prev.0 + &t * &cur.0, &prev.1 + &t * &cur.1);
            break if semi.1.is_zero() || closer(y, m, &cur, &semi) != Ordering::Greater {
                cur
            } else {
                semi
            };
        }
        let next = (&a * &cur.0 + &prev.0, next_q);
        prev = std::mem::replace(&mut cur, next);
    };
    Fraction::new(best.0, best.1)
}
