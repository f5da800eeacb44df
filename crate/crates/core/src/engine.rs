//! Jacobi symbol `(x / N)` for a large odd `N` and a short `x`, touching `N`
//! only one block at a time.
//!
//! The symbol is rewritten as
//!
//! ```text
//! (x/N) = (2/N)^t · (−1)^{(x′−1)(N−1)/4} · (2/x′)^{n−m} · (s/x′)
//! ```
//!
//! where `x = 2^t·x′` and `s = (N − k·x′)/2^{n−m}` comes out of the window
//! reduction, so the final symbol only involves `m`-bit operands.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{inverse_pow2_mults, jacobi, jacobi_reference, two_flips, JacobiValue, Natural};
use crate::window::{match_low_bits_with, ReduceParams};

/// Algorithm used for the final `m`-bit symbol.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseCase {
    #[default]
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub block_bits: u64,
    pub runtime_checks: bool,
    pub base_case: BaseCase,
}

impl EngineConfig {
    pub fn new(block_bits: u64) -> Result<Self> {
        if block_bits == 0 {
            return Err(Error::InvalidParams("block_bits must be at least 1".into()));
        }
        Ok(EngineConfig { block_bits, runtime_checks: true, base_case: BaseCase::Reference })
    }

    pub fn fast(mut self) -> Self {
        self.runtime_checks = false;
        self
    }
}

/// Word-level operation counts for one evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    /// False when `N` fit in a single block and the reference loop ran directly.
    pub streamed: bool,
    /// Block width actually used; widened to `bit_length(x′)` when `x′` is wider.
    pub block_bits: u64,
    pub n_padded: u64,
    pub block_iterations: u64,
    pub peak_window_bits: u64,
    pub mbit_mults: u64,
    pub mbit_adds: u64,
    /// Width of the operands handed to the final symbol computation.
    pub base_case_bits: u64,
}

impl CostReport {
    /// Whether a measured report agrees with a [`cost_model`] prediction:
    /// equal counters, window within the predicted bound.
    pub fn conforms_to(&self, predicted: &CostReport) -> bool {
        self.streamed == predicted.streamed
            && self.block_bits == predicted.block_bits
            && self.n_padded == predicted.n_padded
            && self.block_iterations == predicted.block_iterations
            && self.peak_window_bits <= predicted.peak_window_bits
            && self.mbit_mults == predicted.mbit_mults
            && self.mbit_adds == predicted.mbit_adds
            && self.base_case_bits <= predicted.base_case_bits
    }
}

/// Smallest multiple of `m` covering `N`, or `None` when that is a single
/// block (`n < 2m`) and streaming has nothing to do.
pub fn pad_bitlength(big_n: &Natural, m: u64) -> Option<u64> {
    let bits = big_n.bits().max(1);
    let n = bits.div_ceil(m) * m;
    (n >= 2 * m).then_some(n)
}

/// Predicted counters for a streamed run with register width `n` and block width `m`.
///
/// Each iteration costs two `m`-bit multiplications (`ctrl` and `ctrl·x`) and
/// two additions; precomputing `x⁻¹ mod 2^m` by Newton lifting adds
/// `2·⌈log₂ m⌉` multiplications.
pub fn cost_model(n: u64, m: u64) -> Result<CostReport> {
    let params = ReduceParams::new(n, m)?;
    let iterations = params.iterations();
    Ok(CostReport {
        streamed: true,
        block_bits: m,
        n_padded: n,
        block_iterations: iterations,
        peak_window_bits: 2 * m,
        mbit_mults: 2 * iterations + inverse_pow2_mults(m),
        mbit_adds: 2 * iterations,
        base_case_bits: m,
    })
}

/// Full trace of one streamed evaluation, for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamedEvaluation {
    pub value: JacobiValue,
    pub cost: CostReport,
    pub trailing_zeros: u64,
    pub odd_part: Natural,
    /// `s = ⌊N/2^{n−m}⌋ − z`; `None` on the single-block path.
    pub s: Option<BigInt>,
}

pub fn jacobi_streamed(x: &Natural, big_n: &Natural, config: EngineConfig) -> Result<(JacobiValue, CostReport)> {
    evaluate(x, big_n, config).map(|e| (e.value, e.cost))
}

pub fn evaluate(x: &Natural, big_n: &Natural, config: EngineConfig) -> Result<StreamedEvaluation> {
    if big_n.is_even() || big_n < &BigUint::from(3u32) {
        return Err(Error::BadModulus { value: big_n.clone(), min: 3 });
    }
    if x.is_zero() {
        return Err(Error::InvalidParams("x must be positive".into()));
    }
    if config.block_bits == 0 {
        return Err(Error::InvalidParams("block_bits must be at least 1".into()));
    }
    let t = x.trailing_zeros().unwrap_or(0);
    let odd = x >> t;
    let m = config.block_bits.max(odd.bits());

    let Some(n) = pad_bitlength(big_n, m) else {
        let value = jacobi(x, big_n)?;
        let cost = CostReport {
            streamed: false,
            block_bits: m,
            n_padded: big_n.bits(),
            base_case_bits: big_n.bits(),
            ..CostReport::default()
        };
        return Ok(StreamedEvaluation { value, cost, trailing_zeros: t, odd_part: odd, s: None });
    };

    let n_mod8 = low_bits(big_n, 8);
    let x_mod8 = low_bits(&odd, 8);
    let mut flip = t % 2 == 1 && two_flips(n_mod8);
    flip ^= x_mod8 % 4 == 3 && n_mod8 % 4 == 3;
    flip ^= (n - m) % 2 == 1 && two_flips(x_mod8);
    let mut out = JacobiValue::from_sign_flip(flip);

    let params = ReduceParams::new(n, m)?;
    let reduction = match_low_bits_with(big_n, &odd, params, false, config.runtime_checks)?;
    let s = BigInt::from(big_n >> params.matched_bits()) - BigInt::from(reduction.z);
    if s.magnitude().bits() > m {
        return Err(Error::InvariantViolation(format!("|s| = {} is not below 2^{m}", s.magnitude())));
    }
    let base_case_bits = s.magnitude().bits().max(odd.bits());
    out *= if odd.is_one() {
        JacobiValue::PlusOne
    } else {
        match config.base_case {
            BaseCase::Reference => jacobi_reference(&s, &odd)?,
        }
    };
    let cost = CostReport {
        streamed: true,
        block_bits: m,
        n_padded: n,
        block_iterations: reduction.iterations,
        peak_window_bits: reduction.peak_window_bits,
        mbit_mults: reduction.mults,
        mbit_adds: reduction.adds,
        base_case_bits,
    };
    Ok(StreamedEvaluation { value: out, cost, trailing_zeros: t, odd_part: odd, s: Some(s) })
}

fn low_bits(v: &BigUint, modulus: u64) -> u64 {
    v.iter_u64_digits().next().unwrap_or(0) % modulus
}
