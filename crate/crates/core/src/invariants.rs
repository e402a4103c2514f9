//! Absolute and relative invariants assembled from the tau pipeline.
//!
//! Graded-root quantities describe `-Σ`; every field name carries the
//! orientation it refers to. `λ(-Y) = -λ(Y)`, `δ(-Y) = -δ(Y)` and reduced
//! ranks agree for both orientations.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::delta_tau::tau_profile;
use crate::error::{Error, Result};
use crate::exact;
use crate::graded_root::{build_root, tower_decomposition, UModule};
use crate::seifert::{branched_pair, BranchedPair, BrieskornExponents, SeifertData};
use crate::semigroup::{bound_n, Semigroup};

/// `λ(Σ(a,b,c)) = (4κ - (a-1)(b-1)(c-1)) / 8`.
pub fn casson_from_kappa(a: &BrieskornExponents, kappa: u64) -> Result<i64> {
    let (x, y, z) = a.require_triple()?;
    let numerator = 4 * kappa as i128 - (x as i128 - 1) * (y as i128 - 1) * (z as i128 - 1);
    if numerator % 8 != 0 {
        return Err(Error::IntegralityViolation(numerator as i64));
    }
    Ok((numerator / 8) as i64)
}

pub fn casson(a: &BrieskornExponents) -> Result<i64> {
    a.require_triple()?;
    casson_from_kappa(a, Semigroup::build(a)?.count())
}

/// `d(-Σ) = 2(κ + λ(Σ) + min τ)`.
pub fn d_minus_from_parts(kappa: u64, lambda: i64, min_tau: i64) -> Result<i64> {
    let d = 2 * (kappa as i64 + lambda + min_tau);
    if d % 2 != 0 {
        return Err(Error::ParityViolation(d));
    }
    Ok(d)
}

pub fn d_invariant_minus(a: &BrieskornExponents) -> Result<i64> {
    let report = InvariantReport::compute(a)?;
    Ok(report.d_minus_sigma.expect("three exponents"))
}

/// Reduced module of `-Y` (`p = 1`) or of `-Y/Z_p` in the canonical
/// structure, in the relative `2χ` grading.
pub fn reduced_module(a: &BrieskornExponents, p: u64) -> Result<(UModule, i64)> {
    let sd = SeifertData::new(a);
    let tp = tau_profile(&sd, p)?;
    Ok((tower_decomposition(&build_root(&tp)), tp.min_tau()))
}

pub fn hf_red_rank(a: &BrieskornExponents, p: u64) -> Result<u64> {
    Ok(reduced_module(a, p)?.0.reduced_rank())
}

/// `rk HF_red(Y) - rk HF_red(Y/Z_p)`, which equals `δ_∞ - δ` for a free action.
pub fn delta_inf_minus_delta_free(a: &BrieskornExponents, p: u64) -> Result<u64> {
    let quotient = hf_red_rank(a, p)?;
    let total = hf_red_rank(a, 1)?;
    difference(total, quotient)
}

fn difference(total: u64, quotient: u64) -> Result<u64> {
    let diff = total as i64 - quotient as i64;
    u64::try_from(diff).map_err(|_| Error::NegativeDifference(diff))
}

/// `δ_∞^(p)(Σ)` for a free action, checked against `-λ` when `p > N`.
pub fn delta_inf_free_absolute(a: &BrieskornExponents, p: u64) -> Result<Ratio<i64>> {
    let report = InvariantReport::compute(a)?;
    let delta = report.delta_sigma.expect("three exponents");
    let diff = difference(report.hf_red_rank, hf_red_rank(a, p)?)?;
    let value = delta + diff as i64;
    let lambda = report.casson_sigma.expect("three exponents");
    if BigInt::from(p) > report.bound_n && value != -lambda {
        return Err(Error::CrossCheckFailure(format!("{a}, p = {p}: δ_∞ = {value} but -λ = {}", -lambda)));
    }
    Ok(Ratio::from_integer(value))
}

/// `rk HF_red(Y) - p·rk HF_red(Y/Z_p)`, a lower bound for `δ(-Y) - δ_∞(-Y)`.
pub fn branched_bound(bp: &BranchedPair) -> Result<i64> {
    let total = hf_red_rank(&bp.total, 1)?;
    let base = hf_red_rank(&bp.base, 1)?;
    bound_from_ranks(total, base, bp.p)
}

pub fn bound_from_ranks(total: u64, base: u64, p: u64) -> Result<i64> {
    let bound = total as i64 - p as i64 * base as i64;
    if bound < 0 {
        return Err(Error::NegativeBound(bound));
    }
    Ok(bound)
}

fn torus_knot_exponents(a: u64, b: u64, c: u64) -> Result<BrieskornExponents> {
    if !is_prime(c) {
        return Err(Error::NotPrime(c));
    }
    if a > 1 && b > 1 && (a * b).is_multiple_of(c) {
        return Err(Error::PrimeDividesProduct { p: c, product: a * b });
    }
    BrieskornExponents::new(vec![a, b, c])
}

/// `σ^(c)(T_{a,b}) = 8λ(Σ(a,b,c))`.
pub fn sigma_equivariant(a: u64, b: u64, c: u64) -> Result<i64> {
    Ok(8 * casson(&torus_knot_exponents(a, b, c)?)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusKnotReport {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub kappa: u64,
    pub sigma_c: i64,
    pub j_inv: u64,
    #[serde(with = "exact::ratio")]
    pub theta: Ratio<i64>,
    /// `(a-1)(b-1)/2`.
    #[serde(with = "exact::ratio")]
    pub milnor_genus: Ratio<i64>,
    pub theta_matches_genus: bool,
}

pub fn torus_knot_report(a: u64, b: u64, c: u64) -> Result<TorusKnotReport> {
    let ex = torus_knot_exponents(a, b, c)?;
    let kappa = Semigroup::build(&ex)?.count();
    let lambda = casson_from_kappa(&ex, kappa)?;
    let j_inv = if c == 2 { 2 * kappa } else { kappa };
    let raw = Ratio::new(2 * kappa as i64 - 4 * lambda, c as i64 - 1);
    let theta = raw.max(Ratio::from_integer(0));
    let milnor_genus = Ratio::new((a as i64 - 1) * (b as i64 - 1), 2);
    Ok(TorusKnotReport {
        a,
        b,
        c,
        kappa,
        sigma_c: 8 * lambda,
        j_inv,
        theta,
        milnor_genus,
        theta_matches_genus: theta == milnor_genus,
    })
}

/// Invariants of a Brieskorn sphere. Absolute fields are `None` unless
/// there are exactly three exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub exponents: BrieskornExponents,
    #[serde(with = "exact::bigint")]
    pub bound_n: BigInt,
    pub kappa: Option<u64>,
    pub casson_sigma: Option<i64>,
    pub d_minus_sigma: Option<i64>,
    pub delta_minus_sigma: Option<i64>,
    pub delta_sigma: Option<i64>,
    pub hf_red_rank: u64,
    pub min_tau: i64,
    /// Top reduced degree of `HF⁺(-Σ)`; `None` when the reduced part vanishes
    /// or the grading is only relative.
    pub ell_plus_minus_sigma: Option<i64>,
    /// Reduced module of `-Σ` in the relative `2χ` grading.
    pub module_rel: UModule,
}

impl InvariantReport {
    pub fn compute(a: &BrieskornExponents) -> Result<Self> {
        let sd = SeifertData::new(a);
        let tp = tau_profile(&sd, 1)?;
        let module = tower_decomposition(&build_root(&tp));
        let min_tau = tp.min_tau();
        let mut report = Self {
            exponents: a.clone(),
            bound_n: bound_n(a),
            kappa: None,
            casson_sigma: None,
            d_minus_sigma: None,
            delta_minus_sigma: None,
            delta_sigma: None,
            hf_red_rank: module.reduced_rank(),
            min_tau,
            ell_plus_minus_sigma: None,
            module_rel: module,
        };
        if a.triple().is_some() {
            let kappa = Semigroup::build(a)?.count();
            let lambda = casson_from_kappa(a, kappa)?;
            let d = d_minus_from_parts(kappa, lambda, min_tau)?;
            report.kappa = Some(kappa);
            report.casson_sigma = Some(lambda);
            report.d_minus_sigma = Some(d);
            report.delta_minus_sigma = Some(d / 2);
            report.delta_sigma = Some(-d / 2);
            report.ell_plus_minus_sigma = report.module_rel.top_reduced_degree().ok().map(|top| top + d - 2 * min_tau);
        }
        Ok(report)
    }

    /// `HF⁺_red(-Σ)` in absolute grading, when available.
    pub fn module_abs(&self) -> Option<UModule> {
        self.d_minus_sigma.map(|d| self.module_rel.shifted(d - 2 * self.min_tau))
    }

    /// `rk = -δ(Σ) - λ(Σ)` with the rank read off the graded root.
    pub fn rank_identity_holds(&self) -> Option<bool> {
        Some(self.hf_red_rank as i64 == -self.delta_sigma? - self.casson_sigma?)
    }

    /// `ℓ⁺(-Σ)/2 + λ(-Σ) = κ`; vacuous when the reduced part vanishes.
    pub fn j_prime_holds(&self) -> Option<bool> {
        let kappa = self.kappa? as i64;
        let lambda_minus = -self.casson_sigma?;
        Some(match self.ell_plus_minus_sigma {
            None => true,
            Some(ell) => ell % 2 == 0 && ell / 2 + lambda_minus == kappa,
        })
    }
}

pub fn j_prime_crosscheck(a: &BrieskornExponents) -> Result<bool> {
    a.require_triple()?;
    Ok(InvariantReport::compute(a)?.j_prime_holds().expect("three exponents"))
}

/// Free `Z_p` quotient comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub exponents: BrieskornExponents,
    pub p: u64,
    pub total_rank: u64,
    pub quotient_rank: u64,
    /// `δ_∞^(p)(Σ) - δ(Σ)`.
    pub delta_inf_minus_delta: u64,
    pub delta_sigma: Option<i64>,
    #[serde(with = "opt_ratio")]
    pub delta_inf_sigma: Option<Ratio<i64>>,
}

impl QuotientReport {
    pub fn compute(a: &BrieskornExponents, p: u64) -> Result<Self> {
        let quotient_rank = hf_red_rank(a, p)?;
        let inv = InvariantReport::compute(a)?;
        let diff = difference(inv.hf_red_rank, quotient_rank)?;
        let delta_inf_sigma = match inv.delta_sigma {
            Some(_) => Some(delta_inf_free_absolute(a, p)?),
            None => None,
        };
        Ok(Self {
            exponents: a.clone(),
            p,
            total_rank: inv.hf_red_rank,
            quotient_rank,
            delta_inf_minus_delta: diff,
            delta_sigma: inv.delta_sigma,
            delta_inf_sigma,
        })
    }
}

/// Branched `Z_p` quotient comparison. The bound constrains
/// `δ(-Y) - δ_∞(-Y)` from below only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchedReport {
    pub pair: BranchedPair,
    pub total_rank: u64,
    pub base_rank: u64,
    pub bound: i64,
    pub delta_minus_sigma: Option<i64>,
    /// Upper end of the interval `δ_∞(-Y) <= δ(-Y) - bound`.
    pub delta_inf_minus_sigma_at_most: Option<i64>,
}

impl BranchedReport {
    pub fn compute(total: &BrieskornExponents, p: u64) -> Result<Self> {
        let pair = branched_pair(total, p)?;
        let inv = InvariantReport::compute(total)?;
        let base_rank = hf_red_rank(&pair.base, 1)?;
        let bound = bound_from_ranks(inv.hf_red_rank, base_rank, p)?;
        Ok(Self {
            pair,
            total_rank: inv.hf_red_rank,
            base_rank,
            bound,
            delta_minus_sigma: inv.delta_minus_sigma,
            delta_inf_minus_sigma_at_most: inv.delta_minus_sigma.map(|d| d - bound),
        })
    }
}

mod opt_ratio {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Ratio<i64>>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(r) => crate::exact::ratio::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio<i64>>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| {
                crate::exact::ratio::parse(&t).ok_or_else(|| serde::de::Error::custom(format!("bad rational {t}")))
            })
            .transpose()
    }
}
