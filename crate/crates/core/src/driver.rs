//! Classical wrapper logic around a squarefree-decomposition oracle: success
//! boosting, the `B_max` search, and complete factorization of integers whose
//! prime exponents are pairwise distinct.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{
    factorize, integer_sqrt, is_prime, perfect_power, squarefree_part, Factorization, Natural, DEFAULT_WORK_BUDGET,
};
use crate::report::decimal;
use crate::sim::{Circuit, SimParams, DEFAULT_ELL_CAP};

/// Something that, given `N = A²·B`, tries to return `B` or a prime divisor of `N`.
pub trait SquarefreeOracle {
    fn decompose(&mut self, n: &Natural) -> Result<Natural>;

    fn kind(&self) -> OracleKind;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    QuantumSim,
    ClassicalTrial,
    Injected,
}

/// `(A, B)` with `N = A²·B` and `B` squarefree, by full factorization.
pub fn squarefree_decompose_classical(n: &Natural) -> Result<(Natural, Natural)> {
    if n.is_zero() {
        return Err(Error::InvalidParams("N must be positive".into()));
    }
    squarefree_part(n, DEFAULT_WORK_BUDGET)
}

/// Always exact: returns the true squarefree part.
#[derive(Debug, Clone, Default)]
pub struct ClassicalOracle;

impl SquarefreeOracle for ClassicalOracle {
    fn decompose(&mut self, n: &Natural) -> Result<Natural> {
        Ok(squarefree_decompose_classical(n)?.1)
    }

    fn kind(&self) -> OracleKind {
        OracleKind::ClassicalTrial
    }
}

/// Returns the true `B` with probability `success_rate`, otherwise a random
/// divisor of `N` that is neither `B` nor prime (or `1` when none exists).
#[derive(Debug, Clone)]
pub struct InjectedOracle {
    success_rate: f64,
    fixed: Option<Natural>,
    rng: ChaCha8Rng,
    divisors: HashMap<Natural, (Natural, Vec<Natural>)>,
}

impl InjectedOracle {
    pub fn new(success_rate: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&success_rate) {
            return Err(Error::InvalidParams(format!("success rate {success_rate} outside [0, 1]")));
        }
        Ok(InjectedOracle { success_rate, fixed: None, rng: ChaCha8Rng::seed_from_u64(seed), divisors: HashMap::new() })
    }

    /// An oracle that answers `value` to every query.
    pub fn fixed(value: Natural) -> Self {
        InjectedOracle {
            success_rate: 0.0,
            fixed: Some(value),
            rng: ChaCha8Rng::seed_from_u64(0),
            divisors: HashMap::new(),
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.success_rate
    }

    fn garbage_pool(&mut self, n: &Natural) -> Result<&(Natural, Vec<Natural>)> {
        if !self.divisors.contains_key(n) {
            let (_, b) = squarefree_part(n, DEFAULT_WORK_BUDGET)?;
            let f = factorize(n, DEFAULT_WORK_BUDGET)?;
            let mut divisors = vec![BigUint::one()];
            for (p, e) in f.entries() {
                let mut next = Vec::with_capacity(divisors.len() * (*e as usize + 1));
                for d in &divisors {
                    let mut pk = BigUint::one();
                    for _ in 0..=*e {
                        next.push(d * &pk);
                        pk *= p;
                    }
                }
                divisors = next;
            }
            divisors.retain(|d| d != &b && !is_prime(d));
            divisors.sort();
            if divisors.is_empty() {
                divisors.push(BigUint::one());
            }
            self.divisors.insert(n.clone(), (b, divisors));
        }
        Ok(&self.divisors[n])
    }
}

impl SquarefreeOracle for InjectedOracle {
    fn decompose(&mut self, n: &Natural) -> Result<Natural> {
        if let Some(v) = &self.fixed {
            return Ok(v.clone());
        }
        let hit = self.rng.gen_bool(self.success_rate);
        let pick: f64 = self.rng.gen();
        let (b, pool) = self.garbage_pool(n)?;
        if hit {
            return Ok(b.clone());
        }
        let idx = ((pick * pool.len() as f64) as usize).min(pool.len() - 1);
        Ok(pool[idx].clone())
    }

    fn kind(&self) -> OracleKind {
        OracleKind::Injected
    }
}

/// How the simulator oracle picks `B_max` for a query `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BmaxPolicy {
    /// `B_max = N`, which always covers the squarefree part.
    Input,
    Fixed(#[serde(with = "decimal")] Natural),
}

/// Runs the simulated circuit once per query, sampling one measurement.
///
/// Inputs divisible by a prime up to the cutoff are answered by trial
/// division; the cutoff is at least 2 because the circuit needs an odd `N`.
#[derive(Debug, Clone)]
pub struct SimulatorOracle {
    policy: BmaxPolicy,
    cutoff: u64,
    ell_cap: u32,
    rng: ChaCha8Rng,
    circuits: HashMap<Natural, Circuit>,
}

impl SimulatorOracle {
    pub fn new(policy: BmaxPolicy, seed: u64) -> Self {
        SimulatorOracle {
            policy,
            cutoff: 2,
            ell_cap: DEFAULT_ELL_CAP,
            rng: ChaCha8Rng::seed_from_u64(seed),
            circuits: HashMap::new(),
        }
    }

    pub fn with_cutoff(mut self, cutoff: u64) -> Self {
        self.cutoff = cutoff.max(2);
        self
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.ell_cap = cap;
        self
    }

    fn params_for(&self, n: &Natural) -> Result<SimParams> {
        let b_max = match &self.policy {
            BmaxPolicy::Input => n.clone(),
            BmaxPolicy::Fixed(b) => b.clone(),
        };
        SimParams::with_cap_limit(n.clone(), b_max.max(BigUint::from(2u32)), self.ell_cap)
    }
}

impl SquarefreeOracle for SimulatorOracle {
    fn decompose(&mut self, n: &Natural) -> Result<Natural> {
        for p in 2..=self.cutoff {
            let p = BigUint::from(p);
            if (n % &p).is_zero() && is_prime(&p) {
                return Ok(p);
            }
        }
        if !self.circuits.contains_key(n) {
            let params = self.params_for(n)?.with_cutoff(0);
            self.circuits.insert(n.clone(), Circuit::prepare(&params)?);
        }
        let circuit = self.circuits.get_mut(n).expect("circuit was just inserted");
        Ok(circuit.shot(&mut self.rng)?.output)
    }

    fn kind(&self) -> OracleKind {
        OracleKind::QuantumSim
    }
}

/// `⌈log₂ N⌉ + 10`.
pub fn default_repetitions(n: &Natural) -> u32 {
    let bits = n.bits();
    let ceil_log = if n.is_zero() || n.count_ones() == 1 { bits.saturating_sub(1) } else { bits };
    u32::try_from(ceil_log).unwrap_or(u32::MAX - 10) + 10
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoostExit {
    Prime,
    Square,
    PrimeDivisor,
    SmallestCandidate,
    DeclaredSquarefree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoostOutcome {
    #[serde(with = "decimal")]
    pub value: Natural,
    pub exit: BoostExit,
    /// Outputs `B′` with `B′ | N` and `N/B′` a perfect square, in ascending order.
    pub candidates: Vec<String>,
    pub oracle_runs: u32,
}

/// Runs the oracle up to `t` times and filters its answers by divisibility
/// and the square-quotient test.
pub fn boosted_decompose_detailed(
    n: &Natural,
    oracle: &mut dyn SquarefreeOracle,
    t: u32,
) -> Result<BoostOutcome> {
    if n < &BigUint::from(2u32) {
        return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
    }
    if t == 0 {
        return Err(Error::InvalidParams("T must be at least 1".into()));
    }
    let done = |value: Natural, exit, candidates: Vec<Natural>, runs| BoostOutcome {
        value,
        exit,
        candidates: candidates.iter().map(|c| c.to_string()).collect(),
        oracle_runs: runs,
    };
    if is_prime(n) {
        return Ok(done(n.clone(), BoostExit::Prime, vec![], 0));
    }
    if integer_sqrt(n).1 {
        return Ok(done(BigUint::one(), BoostExit::Square, vec![], 0));
    }
    let mut candidates: Vec<Natural> = Vec::new();
    for run in 1..=t {
        let out = oracle.decompose(n)?;
        if out.is_zero() || !(n % &out).is_zero() {
            continue;
        }
        if out > BigUint::one() && is_prime(&out) {
            return Ok(done(out, BoostExit::PrimeDivisor, candidates, run));
        }
        if integer_sqrt(&(n / &out)).1 && !candidates.contains(&out) {
            candidates.push(out);
        }
    }
    candidates.sort();
    Ok(match candidates.first().cloned() {
        Some(b) => done(b, BoostExit::SmallestCandidate, candidates, t),
        None => done(n.clone(), BoostExit::DeclaredSquarefree, candidates, t),
    })
}

pub fn boosted_decompose(n: &Natural, oracle: &mut dyn SquarefreeOracle, t: u32) -> Result<Natural> {
    boosted_decompose_detailed(n, oracle, t).map(|o| o.value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmaxSearch {
    #[serde(with = "decimal")]
    pub value: Natural,
    /// Every `B_max` tried, in order.
    pub levels: Vec<String>,
    pub exhausted: bool,
}

/// Tries `B_max = 2, 4, 16, 256, …` (the last level capped at `N`) until
/// the boosted oracle returns `1`, a prime divisor, or a valid `B < N`.
pub fn bmax_search<F>(n: &Natural, mut factory: F, t: u32) -> Result<BmaxSearch>
where
    F: FnMut(&Natural) -> Result<Box<dyn SquarefreeOracle>>,
{
    let mut b_max = BigUint::from(2u32);
    let mut levels = Vec::new();
    loop {
        let level = (&b_max).min(n).clone();
        levels.push(level.to_string());
        let mut oracle = factory(&level)?;
        let value = boosted_decompose(n, oracle.as_mut(), t)?;
        let halts = value.is_one()
            || (&value != n && (n % &value).is_zero() && (is_prime(&value) || integer_sqrt(&(n / &value)).1))
            || (&value == n && is_prime(n));
        if halts {
            return Ok(BmaxSearch { value, levels, exhausted: false });
        }
        if &level == n {
            return Ok(BmaxSearch { value: n.clone(), levels, exhausted: true });
        }
        b_max = &b_max * &b_max;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFactorReport {
    pub factorization: Factorization,
    /// Number of boosted-oracle invocations.
    pub oracle_calls: u32,
    /// Number of raw oracle runs across those invocations.
    pub oracle_runs: u64,
    pub aborted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<String>,
}

/// Returns `p^k` and the cofactor with `p ∤ cofactor`.
fn strip(m: &Natural, p: &Natural) -> (u32, Natural) {
    let mut rest = m.clone();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return (k, rest);
        }
        rest = q;
        k += 1;
    }
}

/// Complete factorization of `N` when its prime exponents are pairwise distinct.
///
/// `t = None` uses [`default_repetitions`] of each intermediate value.
pub fn special_factor(n: &Natural, oracle: &mut dyn SquarefreeOracle, t: Option<u32>) -> Result<SpecialFactorReport> {
    if n < &BigUint::from(2u32) {
        return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
    }
    let mut report = SpecialFactorReport {
        factorization: Factorization::new(),
        oracle_calls: 0,
        oracle_runs: 0,
        aborted: false,
        abort_reason: None,
    };
    factor_into(n, oracle, t, &mut report)?;
    if !report.aborted && !report.factorization.has_distinct_exponents() {
        report.aborted = true;
        report.abort_reason = Some("repeated exponent: input is not special".into());
    }
    Ok(report)
}

fn abort(report: &mut SpecialFactorReport, reason: String) -> Result<()> {
    report.aborted = true;
    report.abort_reason = Some(reason);
    Ok(())
}

fn factor_into(
    n: &Natural,
    oracle: &mut dyn SquarefreeOracle,
    t: Option<u32>,
    report: &mut SpecialFactorReport,
) -> Result<()> {
    let mut m = n.clone();
    while !m.is_one() {
        // Prime or prime power.
        if is_prime(&m) {
            report.factorization.add(m, 1);
            return Ok(());
        }
        if let Some((base, e)) = perfect_power(&m)? {
            if is_prime(&base) {
                report.factorization.add(base, e);
                return Ok(());
            }
        }
        // Square: factor the root and double its exponents.
        let (root, square) = integer_sqrt(&m);
        if square {
            let mut inner = SpecialFactorReport {
                factorization: Factorization::new(),
                oracle_calls: 0,
                oracle_runs: 0,
                aborted: false,
                abort_reason: None,
            };
            factor_into(&root, oracle, t, &mut inner)?;
            report.oracle_calls += inner.oracle_calls;
            report.oracle_runs += inner.oracle_runs;
            report.factorization.merge(&inner.factorization.scaled(2));
            if inner.aborted {
                report.aborted = true;
                report.abort_reason = inner.abort_reason;
            }
            return Ok(());
        }

        let reps = t.unwrap_or_else(|| default_repetitions(&m));
        let outcome = boosted_decompose_detailed(&m, oracle, reps)?;
        report.oracle_calls += 1;
        report.oracle_runs += u64::from(outcome.oracle_runs);
        let b = outcome.value;
        let p = if is_prime(&b) {
            b
        } else {
            if b.is_zero() || !(&m % &b).is_zero() || !integer_sqrt(&(&m / &b)).1 {
                return abort(report, format!("{m}/{b} is not a square"));
            }
            if b.is_one() {
                return abort(report, format!("oracle returned 1 for non-square {m}"));
            }
            let (_, k) = strip(&m, &b);
            let p = &b / k.gcd(&b);
            if !is_prime(&p) {
                return abort(report, format!("{p} = B/gcd(k, B) is not prime"));
            }
            p
        };
        let (e, rest) = strip(&m, &p);
        if e == 0 {
            return abort(report, format!("{p} does not divide {m}"));
        }
        report.factorization.add(p, e);
        m = rest;
    }
    Ok(())
}

/// True iff every base is prime, every exponent positive, and the product is `N`.
pub fn validate_factorization(n: &Natural, f: &Factorization) -> bool {
    f.entries().iter().all(|(p, e)| *e > 0 && is_prime(p)) && &f.product() == n
}

/// Whether the prime exponents of `N` are pairwise distinct.
pub fn is_special(n: &Natural) -> Result<bool> {
    if n < &BigUint::from(2u32) {
        return Ok(false);
    }
    Ok(factorize(n, DEFAULT_WORK_BUDGET)?.has_distinct_exponents())
}
