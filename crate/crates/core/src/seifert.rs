//! Seifert invariants of Brieskorn homology spheres.
//!
//! `Σ(a_1, ..., a_r)` with pairwise coprime `a_j > 1` is the Seifert fibred
//! homology sphere `M(e0, (a_1, b_1), ..., (a_r, b_r))` whose invariants are
//! pinned down by `0 < b_j < a_j` and `e0 + Σ b_j / a_j = -1 / A`, where
//! `A = a_1 ⋯ a_r`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mod_inverse};
use crate::error::{Error, Result};
use crate::exact;

/// Pairwise coprime exponents `a_j > 1`, at least three of them.
///
/// The exponents are kept sorted ascending for computation; the order the
/// caller supplied is kept for display.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct BrieskornExponents {
    original: Vec<u64>,
    sorted: Vec<u64>,
}

impl BrieskornExponents {
    pub fn new(exponents: impl Into<Vec<u64>>) -> Result<Self> {
        let original = exponents.into();
        if original.len() < 3 {
            return Err(Error::TooFewExponents(original.len()));
        }
        if let Some(&bad) = original.iter().find(|&&a| a <= 1) {
            return Err(Error::ExponentTooSmall(bad));
        }
        for (i, &x) in original.iter().enumerate() {
            for &y in &original[i + 1..] {
                if x.gcd(&y) != 1 {
                    return Err(Error::NotPairwiseCoprime(x, y));
                }
            }
        }
        let mut sorted = original.clone();
        sorted.sort_unstable();
        Ok(Self { original, sorted })
    }

    /// Exponents in ascending order.
    pub fn as_slice(&self) -> &[u64] {
        &self.sorted
    }

    /// Exponents in the order they were given.
    pub fn original(&self) -> &[u64] {
        &self.original
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn product(&self) -> BigInt {
        self.sorted.iter().fold(BigInt::one(), |acc, &a| acc * a)
    }

    /// The sorted triple, when there are exactly three exponents.
    pub fn triple(&self) -> Option<(u64, u64, u64)> {
        match self.sorted[..] {
            [a, b, c] => Some((a, b, c)),
            _ => None,
        }
    }

    pub(crate) fn require_triple(&self) -> Result<(u64, u64, u64)> {
        self.triple().ok_or(Error::UnsupportedCase("requires exactly three exponents"))
    }

    /// True when `p` divides some exponent.
    pub fn divisible_by(&self, p: u64) -> bool {
        self.sorted.iter().any(|&a| a % p == 0)
    }
}

impl TryFrom<Vec<u64>> for BrieskornExponents {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BrieskornExponents> for Vec<u64> {
    fn from(e: BrieskornExponents) -> Self {
        e.original
    }
}

impl fmt::Display for BrieskornExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Σ(")?;
        for (i, a) in self.original.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Normalized Seifert invariants of a Brieskorn sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertData {
    pub exponents: BrieskornExponents,
    pub e0: i64,
    /// `b_j`, aligned with the sorted exponents.
    pub b: Vec<u64>,
    #[serde(with = "exact::bigint")]
    pub product: BigInt,
}

impl SeifertData {
    pub fn new(exponents: &BrieskornExponents) -> Self {
        let a = exponents.as_slice();
        let product = exponents.product();
        let b: Vec<u64> = a
            .iter()
            .enumerate()
            .map(|(j, &aj)| {
                // (A / a_j) mod a_j, without forming A.
                let cofactor =
                    a.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != j)
                        .fold(1u128, |acc, (_, &ai)| acc * (ai % aj) as u128 % aj as u128) as u64;
                let inv = mod_inverse(cofactor, aj).expect("exponents are pairwise coprime");
                aj - inv
            })
            .collect();

        let weighted: BigInt = a.iter().zip(&b).map(|(&aj, &bj)| (&product / aj) * bj).sum();
        let (e0, rem) = (-(weighted + 1u32)).div_rem(&product);
        assert!(rem.is_zero(), "-1 - Σ b_j A/a_j must be divisible by A");
        let e0 = i64::try_from(e0).expect("|e0| is at most the number of exponents");

        Self { exponents: exponents.clone(), e0, b, product }
    }

    /// `A·e0 + Σ b_j·(A/a_j)`, which is `-1` for every valid datum.
    pub fn cleared_identity(&self) -> BigInt {
        let a = self.exponents.as_slice();
        let mut total = &self.product * self.e0;
        for (&aj, &bj) in a.iter().zip(&self.b) {
            total += (&self.product / aj) * bj;
        }
        total
    }

    /// Pairs `(a_j, b_j)` in sorted exponent order.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.exponents.as_slice().iter().copied().zip(self.b.iter().copied())
    }
}

pub fn brieskorn_seifert_data(exponents: &[u64]) -> Result<SeifertData> {
    Ok(SeifertData::new(&BrieskornExponents::new(exponents.to_vec())?))
}

/// `Y = Σ(a_1, ..., a_r)` with a prime `p` dividing one exponent, together
/// with the quotient `Y/Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchedPair {
    pub total: BrieskornExponents,
    pub base: BrieskornExponents,
    pub p: u64,
}

pub fn branched_pair(total: &BrieskornExponents, p: u64) -> Result<BranchedPair> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let original = total.original();
    let idx = original.iter().position(|&a| a % p == 0).ok_or(Error::PrimeDoesNotDivide { p })?;
    let reduced = original[idx] / p;
    let mut base: Vec<u64> = original.to_vec();
    if reduced == 1 {
        base.remove(idx);
    } else {
        base[idx] = reduced;
    }
    if base.len() < 3 {
        return Err(Error::DegenerateBase { p });
    }
    let base = BrieskornExponents::new(base)?;
    debug_assert_eq!(base.product() * p, total.product());
    Ok(BranchedPair { total: total.clone(), base, p })
}

/// Unnormalized Seifert invariants `(p·e0, (a_j, p·b_j))` of the free
/// quotient `Y/Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeQuotientData {
    pub p: u64,
    pub e0: i64,
    pub pairs: Vec<(u64, u128)>,
}

pub fn free_quotient_data(sd: &SeifertData, p: u64) -> Result<FreeQuotientData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if let Some(&a) = sd.exponents.as_slice().iter().find(|&&a| a % p == 0) {
        return Err(Error::PrimeDividesExponent { p, exponent: a });
    }
    Ok(FreeQuotientData {
        p,
        e0: sd.e0 * p as i64,
        pairs: sd.pairs().map(|(a, b)| (a, b as u128 * p as u128)).collect(),
    })
}
