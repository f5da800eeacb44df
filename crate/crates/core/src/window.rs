//! Block-streaming construction of a multiple `k·x` of odd `x` whose low
//! `n − m` bits agree with `N`.
//!
//! Only a `2m`-bit window `z` is live at any time; `N` is read one `m`-bit block
//! per iteration. Each iteration is invertible given the block it consumed,
//! which [`BlockContext::inverse_step`] demonstrates.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{mod_inverse_pow2_counted, Natural};
use crate::report::decimal;

/// Register width `n` and block width `m`, with `m | n` and `n ≥ 2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceParams {
    n: u64,
    m: u64,
}

impl ReduceParams {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if m == 0 || n % m != 0 || n < 2 * m {
            return Err(Error::InvalidParams(format!(
                "window reduction needs m >= 1, m | n and n >= 2m, got n = {n}, m = {m}"
            )));
        }
        Ok(ReduceParams { n, m })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Number of loop iterations, `n/m − 1`.
    pub fn iterations(&self) -> u64 {
        self.n / self.m - 1
    }

    /// Bits of `N` matched by the constructed multiple, `n − m`.
    pub fn matched_bits(&self) -> u64 {
        self.n - self.m
    }

    fn check_inputs(&self, big_n: &BigUint, x: &BigUint) -> Result<()> {
        if x.is_zero() || x.is_even() {
            return Err(Error::EvenArgument { what: "x", value: x.clone() });
        }
        if x.bits() > self.m {
            return Err(Error::InvalidParams(format!("x = {x} does not fit in {} bits", self.m)));
        }
        if big_n.bits() > self.n {
            return Err(Error::InvalidParams(format!(
                "N has {} bits, more than n = {}",
                big_n.bits(),
                self.n
            )));
        }
        Ok(())
    }
}

/// The live window `z` at the start of iteration `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowState {
    #[serde(with = "decimal")]
    pub z: Natural,
    pub j: u64,
}

impl WindowState {
    pub fn initial() -> Self {
        WindowState { z: BigUint::zero(), j: 0 }
    }
}

/// What one iteration saw and produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub j: u64,
    #[serde(with = "decimal")]
    pub block: Natural,
    #[serde(with = "decimal")]
    pub ctrl: Natural,
    #[serde(with = "decimal")]
    pub z_before: Natural,
    #[serde(with = "decimal")]
    pub z_mid: Natural,
    #[serde(with = "decimal")]
    pub z_after: Natural,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceTrace {
    pub records: Vec<StepRecord>,
}

/// Yields `N_j = ⌊N / 2^{jm}⌋ mod 2^m` for `j = 0, 1, …`.
#[derive(Debug, Clone)]
pub struct BlockStream<'a> {
    source: &'a BigUint,
    m: u64,
    j: u64,
}

impl<'a> BlockStream<'a> {
    pub fn new(source: &'a BigUint, m: u64) -> Self {
        BlockStream { source, m, j: 0 }
    }

    pub fn block(source: &BigUint, m: u64, j: u64) -> BigUint {
        let mask = (BigUint::one() << m) - 1u32;
        (source >> (j * m)) & mask
    }
}

impl Iterator for BlockStream<'_> {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let b = Self::block(self.source, self.m, self.j);
        self.j += 1;
        Some(b)
    }
}

/// Per-reduction constants: `x`, its inverse mod `2^m`, and the block mask.
#[derive(Debug, Clone)]
pub struct BlockContext {
    x: Natural,
    x_minv: Natural,
    m: u64,
    mask: Natural,
    runtime_checks: bool,
    precompute_mults: u64,
}

impl BlockContext {
    pub fn new(x: &Natural, m: u64, runtime_checks: bool) -> Result<Self> {
        let (x_minv, precompute_mults) = mod_inverse_pow2_counted(x, m)?;
        Ok(BlockContext {
            x: x.clone(),
            x_minv,
            m,
            mask: (BigUint::one() << m) - 1u32,
            runtime_checks,
            precompute_mults,
        })
    }

    pub fn x(&self) -> &Natural {
        &self.x
    }

    pub fn x_minv(&self) -> &Natural {
        &self.x_minv
    }

    pub fn precompute_mults(&self) -> u64 {
        self.precompute_mults
    }

    /// One loop iteration: `ctrl = x_minv·(N_j − z) mod 2^m`, `z′ = z + ctrl·x`,
    /// then drop the low block, which equals `N_j`.
    pub fn step(&self, state: &WindowState, block: &Natural) -> Result<(WindowState, StepRecord)> {
        if block > &self.mask {
            return Err(Error::InvalidParams(format!("block {block} exceeds {} bits", self.m)));
        }
        // N_j − z mod 2^m, kept nonnegative.
        let diff = ((block + (&self.mask + 1u32)) - (&state.z & &self.mask)) & &self.mask;
        let ctrl = (&self.x_minv * diff) & &self.mask;
        let z_mid = &state.z + &ctrl * &self.x;
        if self.runtime_checks {
            if (&z_mid & &self.mask) != *block {
                return Err(Error::InvariantViolation(format!(
                    "iteration {}: low bits of z' = {z_mid} differ from block {block}",
                    state.j
                )));
            }
            if z_mid.bits() > 2 * self.m {
                return Err(Error::InvariantViolation(format!(
                    "iteration {}: z' = {z_mid} exceeds {} bits",
                    state.j,
                    2 * self.m
                )));
            }
        }
        let z_after = &z_mid >> self.m;
        if self.runtime_checks && z_after >= self.x {
            return Err(Error::InvariantViolation(format!(
                "iteration {}: window {z_after} is not below x = {}",
                state.j, self.x
            )));
        }
        let record = StepRecord {
            j: state.j,
            block: block.clone(),
            ctrl,
            z_before: state.z.clone(),
            z_mid,
            z_after: z_after.clone(),
        };
        Ok((WindowState { z: z_after, j: state.j + 1 }, record))
    }

    /// Rebuilds the pre-step window from the post-step window and the block,
    /// recovering `ctrl = ⌊z′/x⌋`.
    pub fn inverse_step(&self, after: &WindowState, block: &Natural) -> Result<(WindowState, Natural)> {
        if after.j == 0 {
            return Err(Error::InvalidParams("cannot invert before the first iteration".into()));
        }
        let z_mid = (&after.z << self.m) + block;
        let (ctrl, z) = z_mid.div_rem(&self.x);
        if z >= self.x || ctrl > self.mask {
            return Err(Error::InvariantViolation(format!(
                "inverse of iteration {} recovered z = {z}, ctrl = {ctrl}",
                after.j - 1
            )));
        }
        Ok((WindowState { z, j: after.j - 1 }, ctrl))
    }
}

/// Result of a full reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub z: Natural,
    pub trace: Option<ReduceTrace>,
    pub iterations: u64,
    /// Widest value the window register held, in bits.
    pub peak_window_bits: u64,
    pub mults: u64,
    pub adds: u64,
}

/// Streams the blocks of `N` through the window and returns the top bits `z`
/// of a multiple `y = z·2^{n−m} + (N mod 2^{n−m})` of `x` with `y < 2^{n−m}·x`.
pub fn match_low_bits(
    big_n: &Natural,
    x: &Natural,
    params: ReduceParams,
    want_trace: bool,
) -> Result<Reduction> {
    match_low_bits_with(big_n, x, params, want_trace, true)
}

pub(crate) fn match_low_bits_with(
    big_n: &Natural,
    x: &Natural,
    params: ReduceParams,
    want_trace: bool,
    runtime_checks: bool,
) -> Result<Reduction> {
    params.check_inputs(big_n, x)?;
    let ctx = BlockContext::new(x, params.m, runtime_checks)?;
    let mut state = WindowState::initial();
    let mut trace = want_trace.then(ReduceTrace::default);
    let mut peak = 0u64;
    let iterations = params.iterations();
    for block in BlockStream::new(big_n, params.m).take(iterations as usize) {
        let (next, record) = ctx.step(&state, &block)?;
        peak = peak.max(record.z_mid.bits()).max(record.z_before.bits());
        if let Some(t) = trace.as_mut() {
            t.records.push(record);
        }
        state = next;
    }
    Ok(Reduction {
        z: state.z,
        trace,
        iterations,
        peak_window_bits: peak,
        mults: ctx.precompute_mults + 2 * iterations,
        adds: 2 * iterations,
    })
}

/// Independent ground truth: the unique `k < 2^{n−m}` with `k ≡ N·x⁻¹ (mod 2^{n−m})`,
/// using the extended Euclidean algorithm for the inverse.
pub fn recover_k(big_n: &Natural, x: &Natural, params: ReduceParams) -> Result<Natural> {
    params.check_inputs(big_n, x)?;
    let modulus = BigInt::one() << params.matched_bits();
    let ext = BigInt::from(x.clone()).extended_gcd(&modulus);
    let inv = ext.x.mod_floor(&modulus);
    let k = (BigInt::from(big_n.clone()) * inv).mod_floor(&modulus);
    Ok(k.to_biguint().expect("mod_floor of a positive modulus is nonnegative"))
}
