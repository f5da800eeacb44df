//! Seeded invariant sweeps. The CLI's `verify` subcommands run these; each
//! returns a tally and the first few failures rather than stopping early.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numtheory::{euler_phi, integer_sqrt, is_squarefree, jacobi, JacobiValue};
use crate::sim::{geometric_closed_form, geometric_phase_sum, jacobi_character_dft, trace_distance_check, ZeroPhase};
use crate::window::{match_low_bits, recover_k, BlockContext, BlockStream, ReduceParams, WindowState};

const KEPT_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failures: Vec<String>,
}

impl SuiteResult {
    fn new(suite: &str) -> Self {
        SuiteResult { suite: suite.into(), cases: 0, failures: 0, first_failures: vec![] }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failures.len() < KEPT_FAILURES {
                self.first_failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// `|S(m, k)|` against `√m` or `0` for every odd squarefree `3 ≤ m ≤ max_m`, `k < m`.
pub fn gauss_suite(max_m: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("gauss");
    for m in (3..=max_m).step_by(2) {
        if !is_squarefree(&BigUint::from(m))? {
            continue;
        }
        for k in 0..m {
            let got = jacobi_character_dft(m, k)?.norm();
            let want = if num_integer::gcd(k, m) == 1 { (m as f64).sqrt() } else { 0.0 };
            out.record((got - want).abs() <= 1e-6, || format!("m = {m}, k = {k}: |S| = {got}, want {want}"));
        }
    }
    Ok(out)
}

/// A random reduction instance: `(N, x, n, m)` with `N < 2^n`, odd `x < 2^m`.
pub fn random_window_instance(rng: &mut ChaCha8Rng) -> (BigUint, BigUint, ReduceParams) {
    let m = rng.gen_range(1..=64u64);
    let blocks = rng.gen_range(2..=16u64);
    let n = m * blocks;
    let big_n = random_below_pow2(rng, n);
    let x = (random_below_pow2(rng, m) | BigUint::from(1u32)) & ((BigUint::from(1u32) << m) - 1u32);
    let params = ReduceParams::new(n, m).expect("n is a multiple of m with at least two blocks");
    (big_n, x, params)
}

pub fn random_below_pow2(rng: &mut ChaCha8Rng, bits: u64) -> BigUint {
    let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
    BigUint::from_slice(&words) & ((BigUint::from(1u32) << bits) - 1u32)
}

/// Per-iteration window invariants, exact inversion, and agreement with the
/// extended-Euclid ground truth on random instances.
pub fn window_suite(trials: u64, seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("window");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let (big_n, x, params) = random_window_instance(&mut rng);
        let problems = check_window_instance(&big_n, &x, params)?;
        out.record(problems.is_empty(), || {
            format!("N = {big_n}, x = {x}, n = {}, m = {}: {}", params.n(), params.m(), problems.join("; "))
        });
    }
    Ok(out)
}

/// Every violated property of one reduction, empty when all hold.
pub fn check_window_instance(big_n: &BigUint, x: &BigUint, params: ReduceParams) -> Result<Vec<String>> {
    let m = params.m();
    let mut problems = Vec::new();
    let reduction = match_low_bits(big_n, x, params, true)?;
    let trace = reduction.trace.expect("trace was requested");
    let ctx = BlockContext::new(x, m, true)?;
    // y_j = (Σ_{i<j} ctrl_i·2^{im})·x, rebuilt from the recorded controls.
    let mut k = BigUint::zero();
    let mut blocks = BlockStream::new(big_n, m);
    for rec in &trace.records {
        let j = rec.j;
        let scale = BigUint::from(1u32) << (j * m);
        let y = &k * x;
        if (&y % &scale) != (big_n % &scale) {
            problems.push(format!("y_{j} does not match N mod 2^{}", j * m));
        }
        if y >= &scale * x {
            problems.push(format!("y_{j} not below 2^{}·x", j * m));
        }
        if rec.z_before != &y >> (j * m) {
            problems.push(format!("z_{j} is not the top of y_{j}"));
        }
        if &rec.z_before >= x {
            problems.push(format!("z_{j} = {} not below x", rec.z_before));
        }
        if rec.z_mid.bits() > 2 * m {
            problems.push(format!("z'_{j} wider than 2m"));
        }
        if rec.ctrl != &rec.z_mid / x {
            problems.push(format!("ctrl_{j} differs from floor(z'/x)"));
        }
        let block = blocks.next().expect("stream is unbounded");
        let after = WindowState { z: rec.z_after.clone(), j: j + 1 };
        match ctx.inverse_step(&after, &block) {
            Ok((before, ctrl)) if before.z == rec.z_before && ctrl == rec.ctrl => {}
            _ => problems.push(format!("inverse of iteration {j} does not round-trip")),
        }
        k += &rec.ctrl << (j * m);
    }
    let expected = (recover_k(big_n, x, params)? * x) >> params.matched_bits();
    if expected != reduction.z {
        problems.push(format!("z = {} but the ground truth gives {expected}", reduction.z));
    }
    Ok(problems)
}

/// Geometric sums against their closed form, and the `M/4` floor when `|xM| ≤ 1/2`.
pub fn phases_suite(trials: u64, seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("phases");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..trials {
        let m = rng.gen_range(1..=4096u64);
        let x: f64 = if i % 2 == 0 {
            rng.gen_range(-4.0..4.0)
        } else {
            rng.gen_range(-0.5..=0.5) / m as f64
        };
        let direct = geometric_phase_sum(x, m);
        let closed = geometric_closed_form(x, m);
        out.record((direct - closed).norm() <= 1e-9, || {
            format!("x = {x}, M = {m}: direct {direct}, closed {closed}")
        });
        if (x * m as f64).abs() <= 0.5 {
            out.record(direct.norm() >= m as f64 / 4.0, || {
                format!("x = {x}, M = {m}: |sum| = {} below M/4", direct.norm())
            });
        }
    }
    Ok(out)
}

/// For odd non-square `3 ≤ N ≤ max_n`, the `+1` and `−1` classes each hold `φ(N)/2` units.
pub fn counts_suite(max_n: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("counts");
    for n in (3..=max_n).step_by(2) {
        let big = BigUint::from(n);
        if integer_sqrt(&big).1 {
            continue;
        }
        let (mut plus, mut minus) = (0u64, 0u64);
        for x in 1..n {
            match jacobi(&BigUint::from(x), &big)? {
                JacobiValue::PlusOne => plus += 1,
                JacobiValue::MinusOne => minus += 1,
                JacobiValue::Zero => {}
            }
        }
        let half = euler_phi(&big)?.to_u64().unwrap_or(0) / 2;
        out.record(plus == half && minus == half, || format!("N = {n}: +1 x{plus}, -1 x{minus}, half phi {half}"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub n: u64,
    pub ell: u32,
    pub b: u64,
    pub distance: f64,
    pub norm_sq_psi1: u64,
}

/// Random odd `N` and `M = 2^ℓ`: the coprime count must match both a direct
/// count and the per-class closed form.
pub fn trace_suite(trials: u64, seed: u64) -> Result<(SuiteResult, Vec<TraceSample>)> {
    let mut out = SuiteResult::new("trace");
    let mut samples = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.gen_range(1..2500u64) * 2 + 1;
        let ell = rng.gen_range(4..=12u32);
        let check = trace_distance_check(&BigUint::from(n), ell, ZeroPhase::PlusOne)?;
        let b = check.b.to_u64().unwrap_or(0);
        let direct = (1..=1u64 << ell).filter(|x| x.gcd(&b) == 1).count() as u64;
        out.record(direct == check.norm_sq_psi1 && direct == check.class_sum, || {
            format!("N = {n}, l = {ell}: direct {direct}, psi1 {}, classes {}", check.norm_sq_psi1, check.class_sum)
        });
        samples.push(TraceSample { n, ell, b, distance: check.distance, norm_sq_psi1: check.norm_sq_psi1 });
    }
    Ok((out, samples))
}
