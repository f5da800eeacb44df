//! C ABI for `jacobi-circuit`.
//!
//! Integers cross the boundary as NUL-terminated decimal strings. Every
//! function returns a [`JcStatus`]; on failure a description is available from
//! [`jc_last_error`] on the same thread. Objects are opaque handles released
//! with their matching `*_free` function, and strings returned by the library
//! are released with [`jc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jacobi_circuit::driver::{
    special_factor, validate_factorization, BmaxPolicy, ClassicalOracle, SimulatorOracle, SpecialFactorReport,
    SquarefreeOracle,
};
use jacobi_circuit::engine::{evaluate, CostReport, EngineConfig};
use jacobi_circuit::numtheory::jacobi;
use jacobi_circuit::sim::{run_algorithm1, SimParams, SimReport, DEFAULT_ELL_CAP};
use jacobi_circuit::Error;
use num_bigint::BigUint;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BadModulus = 3,
    CapExceeded = 4,
    InvariantViolation = 5,
    BudgetExceeded = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JcOracle {
    Classical = 0,
    Simulator = 1,
}

/// Operation counts of one streamed evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JcCost {
    pub streamed: bool,
    pub block_bits: u64,
    pub n_padded: u64,
    pub block_iterations: u64,
    pub peak_window_bits: u64,
    pub mbit_mults: u64,
    pub mbit_adds: u64,
    pub base_case_bits: u64,
}

impl From<&CostReport> for JcCost {
    fn from(c: &CostReport) -> Self {
        JcCost {
            streamed: c.streamed,
            block_bits: c.block_bits,
            n_padded: c.n_padded,
            block_iterations: c.block_iterations,
            peak_window_bits: c.peak_window_bits,
            mbit_mults: c.mbit_mults,
            mbit_adds: c.mbit_adds,
            base_case_bits: c.base_case_bits,
        }
    }
}

/// Streamed Jacobi evaluator with a fixed block width.
pub struct JcEngine {
    config: EngineConfig,
}

/// Result of one exact circuit simulation.
pub struct JcSimulation {
    report: SimReport,
}

/// Result of a special-integer factorization.
pub struct JcFactorization {
    n: BigUint,
    report: SpecialFactorReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> JcStatus {
    match e {
        Error::BadModulus { .. } | Error::EvenArgument { .. } => JcStatus::BadModulus,
        Error::InvalidParams(_) => JcStatus::InvalidArgument,
        Error::CapExceeded { .. } => JcStatus::CapExceeded,
        Error::InvariantViolation(_) => JcStatus::InvariantViolation,
        Error::WorkBudgetExceeded(_) => JcStatus::BudgetExceeded,
    }
}

struct Failure(JcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> JcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            JcStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            JcStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(JcStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `s` must be null or point to a NUL-terminated string.
unsafe fn parse_natural(s: *const c_char, what: &str) -> Result<BigUint, Failure> {
    non_null(s, what)?;
    let text = CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(JcStatus::InvalidArgument, format!("{what} is not UTF-8")))?;
    text.trim()
        .parse()
        .map_err(|_| Failure(JcStatus::InvalidArgument, format!("{what} is not a decimal integer: {text:?}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn jc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reference Jacobi symbol `(x / n)` written to `out` as -1, 0 or 1.
///
/// # Safety
/// `x` and `n` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jc_jacobi(x: *const c_char, n: *const c_char, out: *mut i32) -> JcStatus {
    guard(|| {
        non_null(out, "out")?;
        let x = parse_natural(x, "x")?;
        let n = parse_natural(n, "n")?;
        *out = i32::from(jacobi(&x, &n)?.as_i8());
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jc_engine_new(block_bits: u64, out: *mut *mut JcEngine) -> JcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let config = EngineConfig::new(block_bits)?;
        *out = Box::into_raw(Box::new(JcEngine { config }));
        Ok(())
    })
}

/// Streamed `(x / n)`; `cost` may be null.
///
/// # Safety
/// `engine` must come from [`jc_engine_new`]; `x`, `n` must be NUL-terminated
/// strings; `out` must be writable and `cost` null or writable.
#[no_mangle]
pub unsafe extern "C" fn jc_engine_eval(
    engine: *const JcEngine,
    x: *const c_char,
    n: *const c_char,
    out: *mut i32,
    cost: *mut JcCost,
) -> JcStatus {
    guard(|| {
        non_null(engine, "engine")?;
        non_null(out, "out")?;
        let x = parse_natural(x, "x")?;
        let n = parse_natural(n, "n")?;
        let eval = evaluate(&x, &n, (*engine).config)?;
        *out = i32::from(eval.value.as_i8());
        if !cost.is_null() {
            *cost = JcCost::from(&eval.cost);
        }
        Ok(())
    })
}

/// # Safety
/// `engine` must be null or come from [`jc_engine_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jc_engine_free(engine: *mut JcEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Exact simulation of the factoring circuit on odd `n` with bound `b_max`.
/// `ell = 0` derives the register width from `b_max`; `cutoff` is the
/// trial-division bound applied first.
///
/// # Safety
/// `n`, `b_max` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jc_simulation_run(
    n: *const c_char,
    b_max: *const c_char,
    ell: u32,
    cutoff: u64,
    out: *mut *mut JcSimulation,
) -> JcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let n = parse_natural(n, "n")?;
        let b_max = parse_natural(b_max, "b_max")?;
        let mut params = SimParams::with_cap_limit(n, b_max, DEFAULT_ELL_CAP)?.with_cutoff(cutoff);
        if ell != 0 {
            params = params.with_ell(ell)?;
        }
        let report = run_algorithm1(&params)?;
        *out = Box::into_raw(Box::new(JcSimulation { report }));
        Ok(())
    })
}

/// Probability that post-processing returns the true squarefree part.
///
/// # Safety
/// `sim` must come from [`jc_simulation_run`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jc_simulation_success_prob(sim: *const JcSimulation, out: *mut f64) -> JcStatus {
    guard(|| {
        non_null(sim, "sim")?;
        non_null(out, "out")?;
        *out = (*sim).report.success_prob;
        Ok(())
    })
}

/// Full simulation report as a JSON string, freed with [`jc_string_free`].
///
/// # Safety
/// `sim` must come from [`jc_simulation_run`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jc_simulation_json(sim: *const JcSimulation, out: *mut *mut c_char) -> JcStatus {
    guard(|| {
        non_null(sim, "sim")?;
        non_null(out, "out")?;
        let text = serde_json::to_string(&(*sim).report)
            .map_err(|e| Failure(JcStatus::InvariantViolation, e.to_string()))?;
        *out = into_c_string(text);
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or come from [`jc_simulation_run`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jc_simulation_free(sim: *mut JcSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Factors `n`, whose prime exponents must be pairwise distinct. `t = 0`
/// picks the default repetition count. Aborted runs still return a handle;
/// check [`jc_factorization_ok`].
///
/// # Safety
/// `n` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jc_special_factor(
    n: *const c_char,
    oracle: JcOracle,
    t: u32,
    seed: u64,
    out: *mut *mut JcFactorization,
) -> JcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let n = parse_natural(n, "n")?;
        let mut oracle: Box<dyn SquarefreeOracle> = match oracle {
            JcOracle::Classical => Box::new(ClassicalOracle),
            JcOracle::Simulator => Box::new(SimulatorOracle::new(BmaxPolicy::Input, seed)),
        };
        let report = special_factor(&n, oracle.as_mut(), (t != 0).then_some(t))?;
        *out = Box::into_raw(Box::new(JcFactorization { n, report }));
        Ok(())
    })
}

/// True when the run finished and the factorization multiplies back to `n`.
///
/// # Safety
/// `f` must be null or come from [`jc_special_factor`].
#[no_mangle]
pub unsafe extern "C" fn jc_factorization_ok(f: *const JcFactorization) -> bool {
    match f.as_ref() {
        Some(f) => !f.report.aborted && validate_factorization(&f.n, &f.report.factorization),
        None => false,
    }
}

/// Number of distinct primes found.
///
/// # Safety
/// `f` must be null or come from [`jc_special_factor`].
#[no_mangle]
pub unsafe extern "C" fn jc_factorization_len(f: *const JcFactorization) -> usize {
    f.as_ref().map_or(0, |f| f.report.factorization.len())
}

/// Number of boosted-oracle invocations the run made.
///
/// # Safety
/// `f` must be null or come from [`jc_special_factor`].
#[no_mangle]
pub unsafe extern "C" fn jc_factorization_oracle_calls(f: *const JcFactorization) -> u32 {
    f.as_ref().map_or(0, |f| f.report.oracle_calls)
}

/// Entry `index` in ascending prime order. The prime string is freed with
/// [`jc_string_free`].
///
/// # Safety
/// `f` must come from [`jc_special_factor`]; `prime` and `exponent` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jc_factorization_entry(
    f: *const JcFactorization,
    index: usize,
    prime: *mut *mut c_char,
    exponent: *mut u32,
) -> JcStatus {
    guard(|| {
        non_null(f, "factorization")?;
        non_null(prime, "prime")?;
        non_null(exponent, "exponent")?;
        let entries = (*f).report.factorization.entries();
        let (p, e) = entries
            .get(index)
            .ok_or_else(|| Failure(JcStatus::InvalidArgument, format!("index {index} out of {}", entries.len())))?;
        *prime = into_c_string(p.to_string());
        *exponent = *e;
        Ok(())
    })
}

/// # Safety
/// `f` must be null or come from [`jc_special_factor`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jc_factorization_free(f: *mut JcFactorization) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
