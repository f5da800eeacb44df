//! Exact statevector simulation of the Jacobi factoring circuit.
//!
//! The register holds `M = 2^ℓ` amplitudes. The circuit prepares the uniform
//! superposition over `x ∈ [1, M]`, multiplies each amplitude by the phase
//! `j_N(x)`, applies the Fourier transform mod `M`, and measures `y`. Classical
//! post-processing turns `y` into the denominator `X₂ ≤ B_max` of the closest
//! fraction to `y/M`; the run succeeds when `X₂` is the squarefree part `B`.

mod analysis;

pub use analysis::{
    geometric_closed_form, geometric_phase_sum, jacobi_character_dft, trace_distance_check, TraceCheck,
};

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::engine::{jacobi_streamed, EngineConfig};
use crate::error::{Error, Result};
use crate::numtheory::{best_rational_approx, is_prime, squarefree_part, JacobiValue, Natural, DEFAULT_WORK_BUDGET};
use crate::report::{decimal, opt_decimal};

/// Largest register the simulator accepts unless overridden (16M amplitudes).
pub const DEFAULT_ELL_CAP: u32 = 24;

/// Environment variable that overrides [`DEFAULT_ELL_CAP`] for the CLI.
pub const ELL_CAP_ENV: &str = "JACOBI_ELL_CAP";

/// Reads [`ELL_CAP_ENV`], falling back to the default when unset or unparsable.
pub fn ell_cap_from_env() -> u32 {
    std::env::var(ELL_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ELL_CAP)
}

/// `⌊2·log₂ B_max⌋ + 1`, computed exactly as the bit length of `B_max²`.
pub fn auto_ell(b_max: &Natural) -> u32 {
    u32::try_from((b_max * b_max).bits()).unwrap_or(u32::MAX)
}

/// Phase applied where `gcd(x, N) > 1` and the Jacobi symbol vanishes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPhase {
    #[default]
    PlusOne,
    MinusOne,
}

impl ZeroPhase {
    pub fn sign(self) -> f64 {
        match self {
            ZeroPhase::PlusOne => 1.0,
            ZeroPhase::MinusOne => -1.0,
        }
    }
}

/// `j_N(x)`: the Jacobi symbol when nonzero, otherwise the configured phase.
pub fn phase_of(value: JacobiValue, zero_phase: ZeroPhase) -> f64 {
    if value.is_zero() {
        zero_phase.sign()
    } else {
        value.as_f64()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SimMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimParams {
    #[serde(with = "decimal")]
    pub n: Natural,
    #[serde(with = "decimal")]
    pub b_max: Natural,
    pub ell: u32,
    pub small_prime_cutoff: u64,
    pub zero_phase: ZeroPhase,
    pub mode: SimMode,
    pub ell_cap: u32,
}

impl SimParams {
    /// Exact-mode parameters with `ℓ` derived from `B_max`.
    pub fn new(n: Natural, b_max: Natural) -> Result<Self> {
        Self::with_cap_limit(n, b_max, DEFAULT_ELL_CAP)
    }

    /// Like [`SimParams::new`] with a register cap other than the default.
    pub fn with_cap_limit(n: Natural, b_max: Natural, ell_cap: u32) -> Result<Self> {
        if b_max < BigUint::from(2u32) {
            return Err(Error::InvalidParams(format!("B_max must be at least 2, got {b_max}")));
        }
        let ell = auto_ell(&b_max);
        let params = SimParams {
            n,
            b_max,
            ell,
            small_prime_cutoff: 0,
            zero_phase: ZeroPhase::PlusOne,
            mode: SimMode::Exact,
            ell_cap,
        };
        params.validate()?;
        Ok(params)
    }

    /// Overrides `ℓ`; it must still satisfy `2^ℓ > B_max²`.
    pub fn with_ell(mut self, ell: u32) -> Result<Self> {
        self.ell = ell;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cap(mut self, cap: u32) -> Result<Self> {
        self.ell_cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cutoff(mut self, cutoff: u64) -> Self {
        self.small_prime_cutoff = cutoff;
        self
    }

    pub fn with_zero_phase(mut self, zero_phase: ZeroPhase) -> Self {
        self.zero_phase = zero_phase;
        self
    }

    pub fn with_mode(mut self, mode: SimMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell == 0 || self.ell > self.ell_cap {
            return Err(Error::CapExceeded { ell: self.ell, cap: self.ell_cap });
        }
        if u64::from(self.ell) < (&self.b_max * &self.b_max).bits() {
            return Err(Error::InvalidParams(format!(
                "2^{} does not exceed B_max^2 = {}",
                self.ell,
                &self.b_max * &self.b_max
            )));
        }
        Ok(())
    }

    pub fn register_size(&self) -> usize {
        1usize << self.ell
    }
}

/// Complex amplitudes of the `ℓ`-qubit register; index `x mod 2^ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> OutcomeDistribution {
        OutcomeDistribution { prob: self.amplitudes.iter().map(|a| a.norm_sqr()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub prob: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.prob.iter().sum()
    }
}

/// Phases `j_N(x)` for `x = 1..=2^ℓ`, stored at index `x mod 2^ℓ`, computed
/// with the streamed engine at block width `ℓ`.
pub fn phase_table(n: &Natural, ell: u32, zero_phase: ZeroPhase) -> Result<Vec<f64>> {
    let size = 1usize << ell;
    let config = EngineConfig::new(u64::from(ell).max(1))?.fast();
    let mut phases = vec![0.0; size];
    for x in 1..=size as u64 {
        let (value, _) = jacobi_streamed(&BigUint::from(x), n, config)?;
        phases[(x as usize) % size] = phase_of(value, zero_phase);
    }
    Ok(phases)
}

/// Uniform superposition over `x ∈ [1, 2^ℓ]` with phase `j_N(x)` on each term.
pub fn build_phase_state(params: &SimParams) -> Result<StateVector> {
    params.validate()?;
    if params.n.is_even() || params.n < BigUint::from(3u32) {
        return Err(Error::BadModulus { value: params.n.clone(), min: 3 });
    }
    let scale = (params.register_size() as f64).sqrt().recip();
    let phases = phase_table(&params.n, params.ell, params.zero_phase)?;
    Ok(StateVector { amplitudes: phases.into_iter().map(|p| Complex64::new(p * scale, 0.0)).collect() })
}

fn transform(state: &StateVector, inverse: bool) -> Result<StateVector> {
    let len = state.len();
    if !len.is_power_of_two() {
        return Err(Error::InvalidParams(format!("register length {len} is not a power of two")));
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(len) } else { planner.plan_fft_forward(len) };
    let mut buf = state.amplitudes.clone();
    fft.process(&mut buf);
    let scale = (len as f64).sqrt().recip();
    buf.iter_mut().for_each(|a| *a *= scale);
    Ok(StateVector { amplitudes: buf })
}

/// Unitary Fourier transform mod `2^ℓ`:
/// `out[y] = 2^{−ℓ/2} Σ_x in[x]·exp(−2πi·x·y/2^ℓ)`.
pub fn qft_mod_2l(state: &StateVector) -> Result<StateVector> {
    transform(state, false)
}

pub fn inverse_qft_mod_2l(state: &StateVector) -> Result<StateVector> {
    transform(state, true)
}

/// Measurement distribution after the transform.
pub fn outcome_distribution(params: &SimParams) -> Result<OutcomeDistribution> {
    Ok(qft_mod_2l(&build_phase_state(params)?)?.probabilities())
}

/// Denominator of the closest fraction to `y/2^ℓ` with denominator at most `B_max`.
pub fn postprocess(y: u64, ell: u32, b_max: &Natural) -> Result<Natural> {
    let m = BigUint::one() << ell;
    Ok(best_rational_approx(&BigUint::from(y), &m, b_max)?.denominator().clone())
}

/// Every `y` within `1/(2M)` of some `k/B` with `gcd(k, B) = 1`, keyed by `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuccessfulSet {
    pub by_k: BTreeMap<u64, u64>,
    pub ys: BTreeSet<u64>,
}

/// Outcomes `y ∈ [0, 2^ℓ)` with `|y/2^ℓ − k/B| ≤ 2^{−ℓ−1}` for a unit `k`.
///
/// Fails if two units share an outcome or fewer than `φ(B)` outcomes exist.
pub fn successful_y_set(ell: u32, b: u64) -> Result<SuccessfulSet> {
    if b < 2 {
        return Err(Error::InvalidParams(format!("B must be at least 2, got {b}")));
    }
    let m = 1u128 << ell;
    let b128 = u128::from(b);
    let mut by_k = BTreeMap::new();
    let mut ys = BTreeSet::new();
    let mut units = 0u64;
    for k in 1..b {
        if num_integer::gcd(k, b) != 1 {
            continue;
        }
        units += 1;
        // |y·B − k·M| ≤ B/2, i.e. 2|y·B − k·M| ≤ B.
        let base = u128::from(k) * m / b128;
        for y in [base, base + 1] {
            let gap = (y * b128).abs_diff(u128::from(k) * m);
            if y < m && 2 * gap <= b128 {
                let y = y as u64;
                if !ys.insert(y) {
                    return Err(Error::InvariantViolation(format!("outcome {y} claimed by two units")));
                }
                by_k.entry(k).or_insert(y);
            }
        }
    }
    if (ys.len() as u64) < units {
        return Err(Error::InvariantViolation(format!(
            "{} successful outcomes for {units} units of Z_{b}",
            ys.len()
        )));
    }
    Ok(SuccessfulSet { by_k, ys })
}

/// Minimum over successful `y` of `prob(y)·φ(B)`, for the true squarefree part `B`.
pub fn amplitude_lower_bound_check(params: &SimParams) -> Result<f64> {
    let (_, b) = squarefree_part(&params.n, DEFAULT_WORK_BUDGET)?;
    let b = b
        .to_u64()
        .filter(|b| *b >= 2)
        .ok_or_else(|| Error::InvalidParams(format!("squarefree part {b} out of range")))?;
    let dist = outcome_distribution(params)?;
    let set = successful_y_set(params.ell, b)?;
    let phi = set.by_k.len() as f64;
    Ok(set
        .ys
        .iter()
        .map(|&y| dist.prob[y as usize] * phi)
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredMass {
    #[serde(with = "decimal")]
    pub value: Natural,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shot {
    pub y: u64,
    #[serde(with = "decimal")]
    pub output: Natural,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    #[serde(with = "decimal")]
    pub n: Natural,
    /// Ground truth `N = A²·B` from classical factoring.
    #[serde(with = "decimal")]
    pub a: Natural,
    #[serde(with = "decimal")]
    pub b: Natural,
    pub ell: u32,
    /// True when `A, B > 1` and `B ≤ B_max`, so recovering `B` is meaningful.
    pub success_channel: bool,
    pub success_prob: f64,
    pub recovered: Vec<RecoveredMass>,
    pub successful_y_count: u64,
    pub min_successful_amp_ratio: Option<f64>,
    /// Prime found by the small-prime pre-check, which ends the run.
    #[serde(with = "opt_decimal", default)]
    pub trial_division_prime: Option<Natural>,
    pub total_probability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<Vec<Shot>>,
}

fn small_prime_factor(n: &Natural, cutoff: u64) -> Option<Natural> {
    (2..=cutoff)
        .map(BigUint::from)
        .find(|p| (n % p).is_zero() && is_prime(p))
}

/// Reusable outcome distribution plus memoized post-processing for one `(N, ℓ, B_max)`.
#[derive(Debug, Clone)]
pub struct Circuit {
    params: SimParams,
    dist: OutcomeDistribution,
    sampler: WeightedIndex<f64>,
    outputs: BTreeMap<u64, Natural>,
}

impl Circuit {
    pub fn prepare(params: &SimParams) -> Result<Self> {
        let dist = outcome_distribution(params)?;
        let sampler = WeightedIndex::new(&dist.prob)
            .map_err(|e| Error::InvariantViolation(format!("outcome distribution: {e}")))?;
        Ok(Circuit { params: params.clone(), dist, sampler, outputs: BTreeMap::new() })
    }

    pub fn distribution(&self) -> &OutcomeDistribution {
        &self.dist
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn output_for(&mut self, y: u64) -> Result<Natural> {
        if let Some(v) = self.outputs.get(&y) {
            return Ok(v.clone());
        }
        let v = postprocess(y, self.params.ell, &self.params.b_max)?;
        self.outputs.insert(y, v.clone());
        Ok(v)
    }

    /// One measurement followed by post-processing.
    pub fn shot(&mut self, rng: &mut ChaCha8Rng) -> Result<Shot> {
        let y = self.sampler.sample(rng) as u64;
        Ok(Shot { y, output: self.output_for(y)? })
    }
}

/// Runs the full circuit: small-prime check, state preparation, transform,
/// measurement (exact distribution or seeded shots) and post-processing.
pub fn run_algorithm1(params: &SimParams) -> Result<SimReport> {
    params.validate()?;
    let (a, b) = squarefree_part(&params.n, DEFAULT_WORK_BUDGET)?;
    let success_channel = a > BigUint::one() && b > BigUint::one() && b <= params.b_max;
    let mut report = SimReport {
        n: params.n.clone(),
        a,
        b: b.clone(),
        ell: params.ell,
        success_channel,
        success_prob: 0.0,
        recovered: vec![],
        successful_y_count: 0,
        min_successful_amp_ratio: None,
        trial_division_prime: None,
        total_probability: 0.0,
        shots: None,
    };
    if let Some(p) = small_prime_factor(&params.n, params.small_prime_cutoff) {
        report.success_prob = 1.0;
        report.total_probability = 1.0;
        report.recovered = vec![RecoveredMass { value: p.clone(), probability: 1.0 }];
        report.trial_division_prime = Some(p);
        return Ok(report);
    }

    let mut circuit = Circuit::prepare(params)?;
    let mut recovered: BTreeMap<Natural, f64> = BTreeMap::new();
    match params.mode {
        SimMode::Exact => {
            for y in 0..circuit.dist.prob.len() {
                let p = circuit.dist.prob[y];
                if p == 0.0 {
                    continue;
                }
                *recovered.entry(circuit.output_for(y as u64)?).or_default() += p;
            }
            report.total_probability = circuit.dist.total();
        }
        SimMode::Sampled { shots, seed } => {
            if shots == 0 {
                return Err(Error::InvalidParams("sampled mode needs at least one shot".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut list = Vec::with_capacity(shots as usize);
            for _ in 0..shots {
                let shot = circuit.shot(&mut rng)?;
                *recovered.entry(shot.output.clone()).or_default() += 1.0 / shots as f64;
                list.push(shot);
            }
            report.shots = Some(list);
            report.total_probability = 1.0;
        }
    }
    if success_channel {
        report.success_prob = recovered.get(&b).copied().unwrap_or(0.0);
        if let Some(bv) = b.to_u64() {
            let set = successful_y_set(params.ell, bv)?;
            let phi = set.by_k.len() as f64;
            report.successful_y_count = set.ys.len() as u64;
            report.min_successful_amp_ratio = set
                .ys
                .iter()
                .map(|&y| circuit.dist.prob[y as usize] * phi)
                .reduce(f64::min);
        }
    }
    report.recovered = recovered
        .into_iter()
        .map(|(value, probability)| RecoveredMass { value, probability })
        .collect();
    Ok(report)
}
