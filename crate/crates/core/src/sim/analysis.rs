//! Numeric checks of the analytic facts the success bound rests on.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{phase_table, ZeroPhase};
use crate::error::{Error, Result};
use crate::numtheory::{count_in_class, is_squarefree, jacobi_u64, squarefree_part, Natural, DEFAULT_WORK_BUDGET};
use crate::report::decimal;

/// `Σ_{j ∈ Z_m} (j/m)·exp(−2πi·j·k/m)` for odd squarefree `m ≥ 3`.
pub fn jacobi_character_dft(m: u64, k: u64) -> Result<Complex64> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::BadModulus { value: BigUint::from(m), min: 3 });
    }
    if !is_squarefree(&BigUint::from(m))? {
        return Err(Error::InvalidParams(format!("{m} is not squarefree")));
    }
    let k = k % m;
    let mut sum = Complex64::zero();
    for j in 1..m {
        let chi = jacobi_u64(j, m);
        if chi.is_zero() {
            continue;
        }
        // Reduce j·k mod m first so the angle stays accurate for large m.
        let jk = (u128::from(j) * u128::from(k) % u128::from(m)) as f64;
        sum += Complex64::from_polar(chi.as_f64(), -2.0 * PI * jk / m as f64);
    }
    Ok(sum)
}

/// `Σ_{k=0}^{M−1} exp(−2πi·k·x)` by direct summation.
pub fn geometric_phase_sum(x: f64, m: u64) -> Complex64 {
    // Only x mod 1 matters; the centered representative keeps k·r small.
    let r = x - x.round();
    (0..m)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * (k as f64 * r).fract()))
        .sum()
}

/// `(1 − e^{−2πixM}) / (1 − e^{−2πix})`, or `M` when `x` is an integer.
///
/// Evaluated as `e^{−πix(M−1)}·sin(πxM)/sin(πx)`, which avoids the
/// cancellation in `1 − e^{−2πix}` for `x` near an integer.
pub fn geometric_closed_form(x: f64, m: u64) -> Complex64 {
    let r = x - x.round();
    if r == 0.0 {
        return Complex64::new(m as f64, 0.0);
    }
    let ratio = (PI * (r * m as f64 % 2.0)).sin() / (PI * r).sin();
    Complex64::from_polar(ratio, -PI * (r * (m - 1) as f64 % 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    #[serde(with = "decimal")]
    pub b: Natural,
    pub distance: f64,
    /// `#{x ∈ [1, M] : gcd(x, B) = 1}`.
    pub norm_sq_psi1: u64,
    /// The same count summed class by class over the units of `Z_B`.
    pub class_sum: u64,
}

/// Trace distance between the normalized states with amplitudes `(x/B)` and
/// `j_N(x)` over `x ∈ [1, M]`, where `B` is the squarefree part of `N`.
pub fn trace_distance_check(n: &Natural, ell: u32, zero_phase: ZeroPhase) -> Result<TraceCheck> {
    if n.is_even() || n < &BigUint::from(3u32) {
        return Err(Error::BadModulus { value: n.clone(), min: 3 });
    }
    let (_, b) = squarefree_part(n, DEFAULT_WORK_BUDGET)?;
    let bv = b
        .to_u64()
        .ok_or_else(|| Error::InvalidParams(format!("squarefree part {b} does not fit in 64 bits")))?;
    let size = 1u64 << ell;
    let psi2 = phase_table(n, ell, zero_phase)?;

    let mut norm_sq_psi1 = 0u64;
    let mut overlap = 0.0f64;
    for x in 1..=size {
        let chi = if bv == 1 { 1.0 } else { jacobi_u64(x % bv, bv).as_f64() };
        if chi == 0.0 {
            continue;
        }
        norm_sq_psi1 += 1;
        overlap += chi * psi2[(x % size) as usize];
    }
    let norm_sq_psi2: f64 = psi2.iter().map(|p| p * p).sum();

    let class_sum = if bv == 1 {
        size
    } else {
        let mut total = BigInt::zero();
        for j in 1..bv {
            if num_integer::gcd(j, bv) == 1 {
                total += BigInt::from(count_in_class(&BigUint::from(size), &b, &BigUint::from(j))?);
            }
        }
        total
            .to_u64()
            .ok_or_else(|| Error::InvariantViolation("class sum out of range".into()))?
    };
    if class_sum != norm_sq_psi1 {
        return Err(Error::InvariantViolation(format!(
            "coprime count {norm_sq_psi1} differs from class sum {class_sum}"
        )));
    }
    let fidelity = overlap * overlap / (norm_sq_psi1 as f64 * norm_sq_psi2);
    let distance = (1.0 - fidelity).max(0.0).sqrt();
    Ok(TraceCheck { b, distance, norm_sq_psi1, class_sum })
}
