//! Delta and tau sequences.
//!
//! For a Brieskorn sphere with Seifert data `(e0, b_j)` and a scale `p`
//! (`p = 1` for the sphere itself, a prime `p` for the free quotient with
//! its canonical spin^c structure):
//!
//! ```text
//! Δ_p(n) = 1 - n·p·e0 - Σ_j ⌈n·p·b_j / a_j⌉,    τ(i) = Σ_{n<i} Δ_p(n).
//! ```
//!
//! Past `N_p = ⌊N/p⌋` the increments are non-negative, so `τ` on
//! `[0, N_p + 1]` determines the graded root.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::exact;
use crate::seifert::{BrieskornExponents, SeifertData};
use crate::semigroup::{bound_n, tabulated_bound, Semigroup};

/// `Δ_p(n)` evaluated directly with exact ceilings.
pub fn delta_at(sd: &SeifertData, p: u64, n: u64) -> i128 {
    let np = n as u128 * p as u128;
    let mut value = 1i128 - np as i128 * sd.e0 as i128;
    for (a, b) in sd.pairs() {
        // np·b may exceed 128 bits; split np = q·a + r first.
        let (q, r) = (np / a as u128, np % a as u128);
        let ceil = q * b as u128 + (r * b as u128).div_ceil(a as u128);
        value -= ceil as i128;
    }
    value
}

/// The three-exponent semigroup rule for `Δ(n)`, `n ∈ [0, N]`.
pub fn delta_via_semigroup(a: &BrieskornExponents, n: u64) -> Result<i32> {
    a.require_triple()?;
    Semigroup::build(a)?.delta_rule(n)
}

/// Streams `Δ_p(0), Δ_p(1), ...` keeping one quotient/remainder pair per
/// exponent, so each step is a handful of additions.
#[derive(Clone, Debug)]
pub struct DeltaStream {
    value_base: i64,
    base_step: i64,
    terms: Vec<CeilTerm>,
}

#[derive(Clone, Debug)]
struct CeilTerm {
    a: u64,
    step_q: u64,
    step_r: u64,
    q: u64,
    r: u64,
}

impl DeltaStream {
    pub fn new(sd: &SeifertData, p: u64) -> Self {
        let terms = sd
            .pairs()
            .map(|(a, b)| {
                let s = b as u128 * p as u128;
                CeilTerm { a, step_q: (s / a as u128) as u64, step_r: (s % a as u128) as u64, q: 0, r: 0 }
            })
            .collect();
        Self { value_base: 1, base_step: -(sd.e0 * p as i64), terms }
    }
}

impl DeltaStream {
    /// Writes the next `out.len()` values into `out`.
    pub fn fill(&mut self, out: &mut [i64]) {
        let [t0, t1, t2] = &mut self.terms[..] else {
            out.iter_mut().zip(self.by_ref()).for_each(|(o, v)| *o = v);
            return;
        };
        let (mut value, step) = (self.value_base, self.base_step);
        let (mut q, mut r) = ([t0.q, t1.q, t2.q], [t0.r, t1.r, t2.r]);
        let (a, sq, sr) = ([t0.a, t1.a, t2.a], [t0.step_q, t1.step_q, t2.step_q], [t0.step_r, t1.step_r, t2.step_r]);
        for o in out.iter_mut() {
            let mut ceilings = 0;
            for j in 0..3 {
                ceilings += q[j] + (r[j] != 0) as u64;
                q[j] += sq[j];
                r[j] += sr[j];
                // branch-free wrap of the remainder
                let wrap = (r[j] >= a[j]) as u64;
                r[j] -= wrap * a[j];
                q[j] += wrap;
            }
            *o = value - ceilings as i64;
            value += step;
        }
        self.value_base = value;
        for (j, t) in [t0, t1, t2].into_iter().enumerate() {
            t.q = q[j];
            t.r = r[j];
        }
    }
}

impl Iterator for DeltaStream {
    type Item = i64;

    #[inline]
    fn next(&mut self) -> Option<i64> {
        let mut value = self.value_base;
        self.value_base += self.base_step;
        for t in &mut self.terms {
            value -= (t.q + (t.r != 0) as u64) as i64;
            t.q += t.step_q;
            t.r += t.step_r;
            if t.r >= t.a {
                t.r -= t.a;
                t.q += 1;
            }
        }
        Some(value)
    }
}

/// `Δ_p` on `[0, N_p]` and `τ` on `[0, N_p + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauProfile {
    pub exponents: BrieskornExponents,
    pub scale: u64,
    #[serde(with = "exact::bigint")]
    pub bound: BigInt,
    /// `N_p + 1`, or `0` when `N < 0`.
    pub domain_end: u64,
    pub delta: Vec<i32>,
    pub tau: Vec<i64>,
}

impl TauProfile {
    /// Profile for any positive scale, without checking that the scale is
    /// a prime acting freely.
    pub fn from_formula(sd: &SeifertData, p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroScale);
        }
        let bound = bound_n(&sd.exponents);
        let (delta, tau) = match tabulated_bound(&bound)? {
            None => (Vec::new(), vec![0]),
            Some(n) => {
                let np = (n / p) as usize;
                let mut raw = vec![0i64; np + 1];
                fill_delta(sd, p, &mut raw);
                let tau = prefix_sums(&raw);
                (raw.into_iter().map(|d| d as i32).collect(), tau)
            }
        };
        Ok(Self { exponents: sd.exponents.clone(), scale: p, bound, domain_end: (tau.len() - 1) as u64, delta, tau })
    }

    /// `N` when non-negative.
    pub fn bound_u64(&self) -> Option<u64> {
        self.bound.to_u64()
    }

    pub fn min_tau(&self) -> i64 {
        *self.tau.iter().min().expect("tau(0) is always present")
    }

    pub fn max_tau(&self) -> i64 {
        *self.tau.iter().max().expect("tau(0) is always present")
    }
}

/// Writes `Δ_p(0), ..., Δ_p(len-1)` into `out`, one exponent at a time.
///
/// `⌈n·s/a⌉` grows by `s` whenever `n` grows by `a`, so each term is one
/// period table replayed in blocks with a constant offset. Requires
/// `n·p·max(b_j) < 2^63` over the range.
pub fn fill_delta(sd: &SeifertData, p: u64, out: &mut [i64]) {
    let step = sd.e0 * p as i64;
    let mut value = 1i64;
    for o in out.iter_mut() {
        *o = value;
        value -= step;
    }
    let mut table = Vec::new();
    for (a, b) in sd.pairs() {
        let s = b as u128 * p as u128;
        // period padded to at least 64 entries so blocks vectorize
        let reps = 64usize.div_ceil(a as usize);
        let period = a as usize * reps;
        table.clear();
        table.extend((0..period as u128).map(|m| (m * s).div_ceil(a as u128) as i64));
        let block_inc = (s * reps as u128) as i64;
        for (k, chunk) in out.chunks_mut(period).enumerate() {
            let offset = k as i64 * block_inc;
            for (o, &c) in chunk.iter_mut().zip(&table) {
                *o -= c + offset;
            }
        }
    }
}

/// `τ(0) = 0`, `τ(n+1) = τ(n) + Δ(n)`.
pub fn prefix_sums(delta: &[i64]) -> Vec<i64> {
    let mut tau = Vec::with_capacity(delta.len() + 1);
    let mut acc = 0;
    tau.push(0);
    for &d in delta {
        acc += d;
        tau.push(acc);
    }
    tau
}

/// Profile for `p = 1`, or a prime `p` coprime to every exponent.
pub fn tau_profile(sd: &SeifertData, p: u64) -> Result<TauProfile> {
    if p != 1 {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if let Some(&a) = sd.exponents.as_slice().iter().find(|&&a| a % p == 0) {
            return Err(Error::PrimeDividesExponent { p, exponent: a });
        }
    }
    TauProfile::from_formula(sd, p)
}

pub fn min_tau(tp: &TauProfile) -> i64 {
    tp.min_tau()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximaClassification {
    pub max_value: i64,
    pub all_trivial: bool,
    /// First global maximum that is not trivial.
    pub witness: Option<u64>,
}

/// Scans the global maxima of `τ` on `[0, N+1]`.
///
/// A global maximum `n` is trivial when `τ ≡ 1` on `[1, n]` or on `[n, N]`.
pub fn classify_maxima(tp: &TauProfile) -> Result<MaximaClassification> {
    if tp.scale != 1 || tp.exponents.len() != 3 {
        return Err(Error::UnsupportedCase("maxima classification needs p = 1 and three exponents"));
    }
    if tp.bound_u64().is_none_or(|n| n < 1) {
        return Err(Error::UnsupportedCase("maxima classification excludes Σ(2,3,5)"));
    }
    Ok(classify_maxima_tau(&tp.tau))
}

/// Same scan on a bare `τ` over `[0, N+1]`, `N >= 1`.
pub fn classify_maxima_tau(tau: &[i64]) -> MaximaClassification {
    let n = tau.len() - 2;
    let max_value = *tau.iter().max().expect("non-empty");
    // τ ≡ 1 on [1, left_run] and on [right_run, N]
    let left_run = (1..=n).take_while(|&i| tau[i] == 1).last().unwrap_or(0);
    let right_run = (1..=n).rev().take_while(|&i| tau[i] == 1).last().unwrap_or(n + 1);
    let witness = (0..tau.len())
        .filter(|&i| tau[i] == max_value)
        .find(|&i| !(max_value == 1 && i >= 1 && (i <= left_run || i >= right_run)))
        .map(|i| i as u64);
    MaximaClassification { max_value, all_trivial: witness.is_none(), witness }
}

/// `(2,3,6n-1)` with `n >= 2` or `(2,3,6n+1)` with `n >= 1`: the only
/// triples whose tau function may have non-trivial global maxima.
pub fn is_maxima_exception(a: &BrieskornExponents) -> bool {
    matches!(a.triple(), Some((2, 3, c)) if c >= 7 && (c % 6 == 1 || c % 6 == 5))
}
