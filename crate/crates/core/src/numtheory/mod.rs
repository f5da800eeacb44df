//! Arbitrary-precision number theory: Jacobi symbols, inverses modulo powers
//! of two, primality, roots, rational approximation and residue counting.

mod factor;
mod rational;

pub use factor::{
    euler_phi, factorize, is_squarefree, squarefree_part, Factorization, DEFAULT_WORK_BUDGET,
};
pub use rational::{best_rational_approx, Fraction};

use std::fmt;
use std::ops::{Mul, MulAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unbounded nonnegative integer.
pub type Natural = BigUint;
/// Signed integer; `BigInt` keeps zero unsigned so the encoding is canonical.
pub type SignedNatural = BigInt;

/// Value of a Jacobi or Legendre symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum JacobiValue {
    MinusOne,
    Zero,
    PlusOne,
}

impl JacobiValue {
    pub fn from_sign_flip(flip: bool) -> Self {
        if flip {
            JacobiValue::MinusOne
        } else {
            JacobiValue::PlusOne
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            JacobiValue::MinusOne => -1,
            JacobiValue::Zero => 0,
            JacobiValue::PlusOne => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_i8())
    }

    pub fn is_zero(self) -> bool {
        self == JacobiValue::Zero
    }
}

impl From<JacobiValue> for i8 {
    fn from(v: JacobiValue) -> i8 {
        v.as_i8()
    }
}

impl TryFrom<i8> for JacobiValue {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(JacobiValue::MinusOne),
            0 => Ok(JacobiValue::Zero),
            1 => Ok(JacobiValue::PlusOne),
            other => Err(format!("{other} is not a Jacobi symbol value")),
        }
    }
}

impl Mul for JacobiValue {
    type Output = JacobiValue;

    fn mul(self, rhs: JacobiValue) -> JacobiValue {
        JacobiValue::try_from(self.as_i8() * rhs.as_i8()).expect("product of units stays in range")
    }
}

impl MulAssign for JacobiValue {
    fn mul_assign(&mut self, rhs: JacobiValue) {
        *self = *self * rhs;
    }
}

impl fmt::Display for JacobiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacobiValue::MinusOne => f.write_str("-1"),
            JacobiValue::Zero => f.write_str("0"),
            JacobiValue::PlusOne => f.write_str("+1"),
        }
    }
}

pub fn bit_length(n: &BigUint) -> u64 {
    n.bits()
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// `(-1)^((n^2-1)/8)` is negative exactly when `n ≡ 3, 5 (mod 8)`.
pub(crate) fn two_flips(n_mod8: u64) -> bool {
    n_mod8 == 3 || n_mod8 == 5
}

fn low_u64(n: &BigUint) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0)
}

pub(crate) fn jacobi_u64(mut a: u64, mut b: u64) -> JacobiValue {
    debug_assert!(b & 1 == 1);
    a %= b;
    let mut flip = false;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t & 1 == 1 && two_flips(b & 7) {
            flip = !flip;
        }
        if a & 3 == 3 && b & 3 == 3 {
            flip = !flip;
        }
        std::mem::swap(&mut a, &mut b);
        a %= b;
    }
    if b == 1 {
        JacobiValue::from_sign_flip(flip)
    } else {
        JacobiValue::Zero
    }
}

fn jacobi_natural(a: &BigUint, b: &BigUint) -> JacobiValue {
    if let (Some(a), Some(b)) = (a.to_u64(), b.to_u64()) {
        return jacobi_u64(a, b);
    }
    let mut a = a % b;
    let mut b = b.clone();
    let mut flip = false;
    while !a.is_zero() {
        let t = a.trailing_zeros().unwrap_or(0);
        a >>= t;
        let b8 = low_u64(&b) & 7;
        if t & 1 == 1 && two_flips(b8) {
            flip = !flip;
        }
        if low_u64(&a) & 3 == 3 && b8 & 3 == 3 {
            flip = !flip;
        }
        std::mem::swap(&mut a, &mut b);
        a %= &b;
        if let (Some(a), Some(b)) = (a.to_u64(), b.to_u64()) {
            return JacobiValue::from_sign_flip(flip) * jacobi_u64(a, b);
        }
    }
    if b.is_one() {
        JacobiValue::from_sign_flip(flip)
    } else {
        JacobiValue::Zero
    }
}

/// Jacobi symbol `(a / b)` for odd positive `b`, by the reciprocity loop.
///
/// A negative numerator contributes `(-1)^((b-1)/2)` before reduction mod `b`.
pub fn jacobi_reference(a: &BigInt, b: &BigUint) -> Result<JacobiValue> {
    if b.is_zero() || b.is_even() {
        return Err(Error::BadModulus { value: b.clone(), min: 1 });
    }
    let sign = if a.sign() == Sign::Minus && low_u64(b) & 3 == 3 {
        JacobiValue::MinusOne
    } else {
        JacobiValue::PlusOne
    };
    Ok(sign * jacobi_natural(a.magnitude(), b))
}

/// Convenience form of [`jacobi_reference`] for nonnegative numerators.
pub fn jacobi(a: &BigUint, b: &BigUint) -> Result<JacobiValue> {
    if b.is_zero() || b.is_even() {
        return Err(Error::BadModulus { value: b.clone(), min: 1 });
    }
    Ok(jacobi_natural(a, b))
}

/// Inverse of odd `x` modulo `2^m`, together with the number of big-integer
/// multiplications the Newton lifting spent.
pub fn mod_inverse_pow2_counted(x: &BigUint, m: u64) -> Result<(BigUint, u64)> {
    if x.is_even() {
        return Err(Error::EvenArgument { what: "x", value: x.clone() });
    }
    if m == 0 {
        return Ok((BigUint::zero(), 0));
    }
    // w = x mod 2 = 1 is already the inverse mod 2.
    let mut w = BigUint::one();
    let mut precision = 1u64;
    let mut mults = 0;
    while precision < m {
        precision = (precision * 2).min(m);
        let modulus = BigUint::one() << precision;
        let mask = &modulus - 1u32;
        let wx = (&w * x) & &mask;
        let correction = (&modulus + 2u32 - wx) & &mask;
        w = (&w * correction) & &mask;
        mults += 2;
    }
    Ok((w, mults))
}

pub fn mod_inverse_pow2(x: &BigUint, m: u64) -> Result<BigUint> {
    mod_inverse_pow2_counted(x, m).map(|(w, _)| w)
}

/// Number of multiplications [`mod_inverse_pow2_counted`] performs for `m` bits.
pub fn inverse_pow2_mults(m: u64) -> u64 {
    if m <= 1 {
        0
    } else {
        2 * u64::from(64 - (m - 1).leading_zeros())
    }
}

const DETERMINISTIC_WITNESSES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const SMALL_PRIMES: [u32; 12] = DETERMINISTIC_WITNESSES;

fn is_witness(a: &BigUint, n: &BigUint, d: &BigUint, s: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return false;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return false;
        }
        if x.is_one() {
            return true;
        }
    }
    true
}

/// Miller–Rabin test. Exact below `2^64`; above, random witnesses drawn from
/// `seed` bound the error by `4^-rounds`.
pub fn is_probable_prime(n: &BigUint, rounds: u32, seed: u64) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == &BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    if n.bits() <= 64 {
        return DETERMINISTIC_WITNESSES
            .iter()
            .all(|&a| !is_witness(&BigUint::from(a), n, &d, s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = n - 3u32;
    let bytes = n.bits().div_ceil(8) as usize + 8;
    (0..rounds.max(1)).all(|_| {
        let raw: Vec<u8> = (0..bytes).map(|_| rng.gen()).collect();
        let a = BigUint::from_bytes_le(&raw) % &span + 2u32;
        !is_witness(&a, n, &d, s)
    })
}

/// Default parameters for primality checks inside the library.
pub const PRIME_ROUNDS: u32 = 40;
pub const PRIME_SEED: u64 = 0x5e_ed0f_9a1e;

pub fn is_prime(n: &BigUint) -> bool {
    is_probable_prime(n, PRIME_ROUNDS, PRIME_SEED)
}

/// `(⌊√n⌋, whether n is a perfect square)`.
pub fn integer_sqrt(n: &BigUint) -> (BigUint, bool) {
    let root = n.sqrt();
    let exact = &root * &root == *n;
    (root, exact)
}

/// Largest `k ≥ 2` with `n = a^k`, if any.
pub fn perfect_power(n: &BigUint) -> Result<Option<(BigUint, u32)>> {
    if n < &BigUint::from(2u32) {
        return Err(Error::InvalidParams(format!("perfect_power needs n >= 2, got {n}")));
    }
    let max_k = u32::try_from(n.bits() - 1).unwrap_or(u32::MAX);
    for k in (2..=max_k).rev() {
        let root = n.nth_root(k);
        if root >= BigUint::from(2u32) && root.pow(k) == *n {
            return Ok(Some((root, k)));
        }
    }
    Ok(None)
}

/// Number of `x ∈ [1, M]` with `x ≡ j (mod B)`, in closed form.
pub fn count_in_class(m: &BigUint, b: &BigUint, j: &BigUint) -> Result<BigUint> {
    if b <= &BigUint::one() || j >= b {
        return Err(Error::InvalidParams(format!(
            "count_in_class needs B > 1 and 0 <= j < B, got B = {b}, j = {j}"
        )));
    }
    let m = BigInt::from(m.clone());
    let b = BigInt::from(b.clone());
    let j = BigInt::from(j.clone());
    let upper = (&m - &j).div_floor(&b);
    let lower = (BigInt::one() - &j).div_ceil(&b);
    let count: BigInt = upper - lower + 1;
    Ok(count.to_biguint().unwrap_or_default())
}
