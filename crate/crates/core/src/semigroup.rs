//! The numerical semigroup generated by `A/a_j` and the count `κ`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::mod_inverse;
use crate::error::{Error, Result};
use crate::exact;
use crate::seifert::BrieskornExponents;

/// Largest `N` whose range `[0, N]` we are willing to tabulate.
pub const MAX_TABULATED: u64 = 1 << 32;

/// `N = (r-2)·A - Σ A/a_j`. Negative only for `Σ(2,3,5)`.
pub fn bound_n(a: &BrieskornExponents) -> BigInt {
    let product = a.product();
    let r = a.len() as i64;
    let mut n = &product * (r - 2);
    for &aj in a.as_slice() {
        n -= &product / aj;
    }
    n
}

/// `N` as a tabulation length, or `None` when `N < 0`.
pub(crate) fn tabulated_bound(n: &BigInt) -> Result<Option<u64>> {
    if n.is_negative() {
        return Ok(None);
    }
    match n.to_u64() {
        Some(v) if v <= MAX_TABULATED => Ok(Some(v)),
        _ => Err(Error::ProfileTooLarge(n.clone())),
    }
}

/// `G ∩ [0, N]` for the semigroup `G` generated by `A/a_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semigroup {
    pub generators: Vec<u64>,
    #[serde(with = "exact::bigint")]
    pub bound: BigInt,
    #[serde(skip)]
    members: Vec<bool>,
}

impl Semigroup {
    pub fn build(a: &BrieskornExponents) -> Result<Self> {
        let bound = bound_n(a);
        let product = a.product();
        let generators: Vec<u64> =
            a.as_slice().iter().map(|&aj| (&product / aj).to_u64().unwrap_or(u64::MAX)).collect();
        let members = match tabulated_bound(&bound)? {
            None => Vec::new(),
            Some(n) if generators.len() == 3 => enumerate_members(&generators, n),
            Some(n) => members_by_dp(&generators, n),
        };
        Ok(Self { generators, bound, members })
    }

    /// Membership for `n` in `[0, N]`; `false` outside.
    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        self.members.get(n as usize).copied().unwrap_or(false)
    }

    /// Membership table for `[0, N]`; empty when `N < 0`.
    pub fn membership(&self) -> &[bool] {
        &self.members
    }

    /// `N` when it is non-negative.
    pub fn range_end(&self) -> Option<u64> {
        self.members.len().checked_sub(1).map(|n| n as u64)
    }

    /// `|G ∩ [0, N]|`.
    pub fn count(&self) -> u64 {
        self.members.iter().filter(|&&m| m).count() as u64
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as u64)
    }

    /// The three-exponent rule: `Δ(n)` is `1` on `G`, `-1` on `N - G`, else `0`.
    pub fn delta_rule(&self, n: u64) -> Result<i32> {
        let end = self
            .range_end()
            .filter(|&end| n <= end)
            .ok_or_else(|| Error::OutOfRange { n, bound: self.bound.clone() })?;
        Ok(if self.members[n as usize] {
            1
        } else if self.members[(end - n) as usize] {
            -1
        } else {
            0
        })
    }
}

/// Marks `i·g0 + j·g1 + k·g2 <= n` directly; each element of `G ∩ [0, n]`
/// is reached once per representation.
fn enumerate_members(gens: &[u64], n: u64) -> Vec<bool> {
    let mut members = vec![false; n as usize + 1];
    let (g0, g1, g2) = (gens[0], gens[1], gens[2]);
    for x in (0..=n).step_by(g0 as usize) {
        for y in (x..=n).step_by(g1 as usize) {
            for z in (y..=n).step_by(g2 as usize) {
                members[z as usize] = true;
            }
        }
    }
    members
}

/// Coin-change closure: one forward pass per generator allows it to be used
/// any number of times.
fn members_by_dp(gens: &[u64], n: u64) -> Vec<bool> {
    let len = n as usize + 1;
    let mut members = vec![false; len];
    members[0] = true;
    for &g in gens.iter().filter(|&&g| g <= n) {
        let g = g as usize;
        for i in g..len {
            members[i] |= members[i - g];
        }
    }
    members
}

pub fn build_membership(a: &BrieskornExponents) -> Result<Semigroup> {
    Semigroup::build(a)
}

/// `κ(a,b,c) = |G ∩ [0, N]|`.
pub fn kappa(a: &BrieskornExponents) -> Result<u64> {
    a.require_triple()?;
    Ok(Semigroup::build(a)?.count())
}

/// Digits `(i, j, k)` with `n = bc·i + ac·j + ab·k`, `i < a`, `j < b`, `k < c`.
///
/// Each digit is forced modulo its own exponent, so the representation is
/// found by three modular inversions and a final check.
pub fn unique_representation(a: &BrieskornExponents, n: u64) -> Result<(u64, u64, u64)> {
    let (x, y, z) = a.require_triple()?;
    let bound = bound_n(a);
    if BigInt::from(n) > bound {
        return Err(Error::OutOfRange { n, bound });
    }
    let digit = |m: u64, cofactor: u128| -> u64 {
        let inv = mod_inverse((cofactor % m as u128) as u64, m).expect("coprime exponents");
        ((n % m) as u128 * inv as u128 % m as u128) as u64
    };
    let (bc, ac, ab) = (y as u128 * z as u128, x as u128 * z as u128, x as u128 * y as u128);
    let (i, j, k) = (digit(x, bc), digit(y, ac), digit(z, ab));
    if bc * i as u128 + ac * j as u128 + ab * k as u128 == n as u128 {
        Ok((i, j, k))
    } else {
        Err(Error::NotInSemigroup(n))
    }
}

/// `#{(x,y,z) : 0<x<a, 0<y<b, 0<z<c, x/a + y/b + z/c < 1}`.
///
/// After clearing denominators the condition on `z` is `z·ab < abc - x·bc - y·ac`,
/// so the inner count is a single division.
pub fn lattice_count_tau1(a: &BrieskornExponents) -> Result<u64> {
    let (x_max, y_max, z_max) = a.require_triple()?;
    let (a, b, c) = (x_max as u128, y_max as u128, z_max as u128);
    let abc = a * b * c;
    let mut count = 0u128;
    for x in 1..a {
        for y in 1..b {
            let used = x * b * c + y * a * c;
            if used >= abc {
                break;
            }
            let room = abc - used;
            // largest z with z·ab < room
            let zs = (room - 1) / (a * b);
            count += zs.min(c - 1);
        }
    }
    Ok(count as u64)
}
