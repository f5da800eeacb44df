//! Desk-scale complete factorization (trial division plus Pollard–Brent rho)
//! and the quantities derived from it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{is_prime, Natural};
use crate::error::{Error, Result};

/// Iteration budget for the rho stage, summed over all splits of one input.
pub const DEFAULT_WORK_BUDGET: u64 = 5_000_000;

const TRIAL_LIMIT: u64 = 1 << 12;

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "entries_serde")]
    entries: Vec<(Natural, u32)>,
}

mod entries_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        prime: String,
        exponent: u32,
    }

    pub fn serialize<S: Serializer>(v: &[(Natural, u32)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = v
            .iter()
            .map(|(p, e)| Entry { prime: p.to_string(), exponent: *e })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(Natural, u32)>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        entries
            .into_iter()
            .map(|e| {
                e.prime
                    .parse::<BigUint>()
                    .map(|p| (p, e.exponent))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl Factorization {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from arbitrary pairs, merging repeated bases and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Natural, u32)>>(pairs: I) -> Self {
        let mut f = Factorization::new();
        for (p, e) in pairs {
            f.add(p, e);
        }
        f
    }

    pub fn add(&mut self, prime: Natural, exponent: u32) {
        if exponent == 0 {
            return;
        }
        match self.entries.binary_search_by(|(p, _)| p.cmp(&prime)) {
            Ok(i) => self.entries[i].1 += exponent,
            Err(i) => self.entries.insert(i, (prime, exponent)),
        }
    }

    pub fn merge(&mut self, other: &Factorization) {
        for (p, e) in &other.entries {
            self.add(p.clone(), *e);
        }
    }

    pub fn entries(&self) -> &[(Natural, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn product(&self) -> Natural {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn exponent_of(&self, prime: &Natural) -> u32 {
        self.entries
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, e)| *e)
    }

    pub fn has_distinct_exponents(&self) -> bool {
        let mut seen: Vec<u32> = self.entries.iter().map(|(_, e)| *e).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Multiplies every exponent by `k`, i.e. the factorization of `n^k`.
    pub fn scaled(&self, k: u32) -> Self {
        Factorization {
            entries: self.entries.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }

    /// True iff the product is `n`, every base is prime and exponents are positive.
    pub fn validates(&self, n: &Natural) -> bool {
        self.entries.iter().all(|(p, e)| *e > 0 && is_prime(p))
            && self.entries.windows(2).all(|w| w[0].0 < w[1].0)
            && self.product() == *n
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn rho_split(n: &BigUint, seed: u64, budget: &mut u64) -> Option<BigUint> {
    // Brent's cycle finding with batched gcds.
    let c = BigUint::from(seed % 1000 + 1);
    let f = |v: &BigUint| (v * v + &c) % n;
    let mut y = BigUint::from(seed % 97 + 2) % n;
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    const BATCH: u64 = 64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += BATCH;
            let spent = BATCH.min(r);
            if *budget < spent {
                return None;
            }
            *budget -= spent;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

fn split_into(n: BigUint, acc: &mut BTreeMap<BigUint, u32>, budget: &mut u64, original: &BigUint) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_prime(&n) {
        *acc.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    if let Some((root, k)) = super::perfect_power(&n)? {
        let mut inner = BTreeMap::new();
        split_into(root, &mut inner, budget, original)?;
        for (p, e) in inner {
            *acc.entry(p).or_insert(0) += e * k;
        }
        return Ok(());
    }
    for seed in 1u64.. {
        if *budget == 0 {
            return Err(Error::WorkBudgetExceeded(original.clone()));
        }
        if let Some(d) = rho_split(&n, seed, budget) {
            let other = &n / &d;
            split_into(d, acc, budget, original)?;
            split_into(other, acc, budget, original)?;
            return Ok(());
        }
    }
    unreachable!()
}

/// Complete factorization; fails once the rho stage exhausts `budget` iterations.
pub fn factorize(n: &Natural, budget: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidParams("cannot factor 0".into()));
    }
    let mut acc: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && BigUint::from(d * d) <= rest {
        while (&rest % d).is_zero() {
            rest /= d;
            *acc.entry(BigUint::from(d)).or_insert(0) += 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.to_u64().is_some_and(|r| r > 1 && r < d * d) {
        *acc.entry(rest.clone()).or_insert(0) += 1;
        rest = BigUint::one();
    }
    let mut budget = budget;
    split_into(rest, &mut acc, &mut budget, n)?;
    Ok(Factorization::from_pairs(acc))
}

pub fn euler_phi(n: &Natural) -> Result<Natural> {
    let f = factorize(n, DEFAULT_WORK_BUDGET)?;
    Ok(f.entries().iter().fold(BigUint::one(), |acc, (p, e)| {
        acc * p.pow(e - 1) * (p - 1u32)
    }))
}

pub fn is_squarefree(n: &Natural) -> Result<bool> {
    Ok(factorize(n, DEFAULT_WORK_BUDGET)?.entries().iter().all(|(_, e)| *e == 1))
}

/// The unique `(A, B)` with `n = A²·B` and `B` squarefree.
pub fn squarefree_part(n: &Natural, budget: u64) -> Result<(Natural, Natural)> {
    let f = factorize(n, budget)?;
    let mut a = BigUint::one();
    let mut b = BigUint::one();
    for (p, e) in f.entries() {
        a *= p.pow(e / 2);
        if e % 2 == 1 {
            b *= p;
        }
    }
    Ok((a, b))
}
