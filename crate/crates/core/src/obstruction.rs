//! Non-extension verdicts for cyclic actions on Brieskorn spheres.
//!
//! Every criterion here is one-directional: a verdict of
//! [`Conclusion::NotObstructedByTheseCriteria`] never claims an extension
//! exists. An obstructed verdict carries a [`Certificate`], a signed sum of
//! recomputable quantities compared against a threshold.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_divisors};
use crate::error::{Error, Result};
use crate::invariants::{hf_red_rank, InvariantReport};
use crate::seifert::{branched_pair, BrieskornExponents};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    FreeRationalBall,
    BranchedRationalBall,
    PositiveDefinite,
    ConnectedSumRationalBall,
    ConnectedSumPositiveDefinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    Obstructed,
    NotObstructedByTheseCriteria,
}

/// How to recompute a certificate quantity from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    /// `rk HF_red` of `Σ(exponents)` (`p = 1`) or of its free quotient by `Z_p`.
    HfRedRank { exponents: Vec<u64>, p: u64 },
    /// `δ(Σ(exponents))` for three exponents.
    DeltaSigma { exponents: Vec<u64> },
}

impl Source {
    fn recompute(&self) -> Result<i64> {
        match self {
            Source::HfRedRank { exponents, p } => {
                Ok(hf_red_rank(&BrieskornExponents::new(exponents.clone())?, *p)? as i64)
            }
            Source::DeltaSigma { exponents } => {
                let report = InvariantReport::compute(&BrieskornExponents::new(exponents.clone())?)?;
                report.delta_sigma.ok_or(Error::UnsupportedCase("δ needs three exponents"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: i64,
    pub label: String,
    pub value: i64,
    pub source: Source,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "!=")]
    NotEqual,
}

impl Relation {
    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Greater => lhs > rhs,
            Relation::Less => lhs < rhs,
            Relation::NotEqual => lhs != rhs,
        }
    }
}

/// `Σ coefficient·value  relation  threshold`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub criterion: String,
    pub terms: Vec<Term>,
    pub relation: Relation,
    pub threshold: i64,
}

impl Certificate {
    fn new(criterion: &str, relation: Relation, threshold: i64) -> Self {
        Self { criterion: criterion.to_owned(), terms: Vec::new(), relation, threshold }
    }

    fn term(mut self, coefficient: i64, label: String, value: i64, source: Source) -> Self {
        self.terms.push(Term { coefficient, label, value, source });
        self
    }

    pub fn lhs(&self) -> i64 {
        self.terms.iter().map(|t| t.coefficient * t.value).sum()
    }

    /// The stated inequality holds for the stored numbers.
    pub fn holds(&self) -> bool {
        self.relation.holds(self.lhs(), self.threshold)
    }

    /// Recomputes every quantity from its source; true iff all stored values
    /// are reproduced and the inequality holds.
    pub fn verify(&self) -> Result<bool> {
        for t in &self.terms {
            if t.source.recompute()? != t.value {
                return Ok(false);
            }
        }
        Ok(self.holds())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub scenario: Scenario,
    pub summands: Vec<BrieskornExponents>,
    /// Order of the acting cyclic group.
    pub order: u64,
    pub conclusion: Conclusion,
    pub certificate: Option<Certificate>,
    pub caveats: Vec<String>,
    pub notes: Vec<String>,
}

impl ObstructionVerdict {
    fn new(scenario: Scenario, summands: Vec<BrieskornExponents>, order: u64) -> Self {
        Self {
            scenario,
            summands,
            order,
            conclusion: Conclusion::NotObstructedByTheseCriteria,
            certificate: None,
            caveats: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn obstruct(&mut self, certificate: Certificate) {
        debug_assert!(certificate.holds());
        self.conclusion = Conclusion::Obstructed;
        self.certificate = Some(certificate);
    }

    pub fn is_obstructed(&self) -> bool {
        self.conclusion == Conclusion::Obstructed
    }
}

fn rank_term(cert: Certificate, coefficient: i64, a: &BrieskornExponents, p: u64, value: u64) -> Certificate {
    let label = if p == 1 { format!("rk HF_red({a})") } else { format!("rk HF_red({a}/Z_{p})") };
    cert.term(coefficient, label, value as i64, Source::HfRedRank { exponents: a.original().to_vec(), p })
}

fn delta_term(cert: Certificate, a: &BrieskornExponents, value: i64) -> Certificate {
    cert.term(1, format!("δ({a})"), value, Source::DeltaSigma { exponents: a.original().to_vec() })
}

fn h2_caveat(p: u64) -> String {
    format!("requires {p} not to divide |H^2(W; Z)|")
}

const PD_CAVEATS: [&str; 2] = ["applies only to extensions that act trivially on homology", "requires b_1(W) = 0"];

/// `Z_m` acting freely, `W` a rational homology ball.
pub fn free_rational_ball_verdict(a: &BrieskornExponents, m: u64) -> Result<ObstructionVerdict> {
    if m < 2 {
        return Err(Error::UnsupportedScenario(format!("group order {m} must exceed 1")));
    }
    if let Some(&shared) = a.as_slice().iter().find(|&&x| x.gcd(&m) != 1) {
        return Err(Error::UnsupportedScenario(format!(
            "Z_{m} does not act freely on {a} ({shared} shares a factor with {m}); use the branched criterion"
        )));
    }
    let mut verdict = ObstructionVerdict::new(Scenario::FreeRationalBall, vec![a.clone()], m);
    verdict.caveats.push("requires W to be a rational homology 4-ball".to_owned());
    let total = hf_red_rank(a, 1)?;
    for p in prime_divisors(m) {
        let quotient = hf_red_rank(a, p)?;
        if total > quotient {
            let cert = Certificate::new("free-quotient rank gap forces δ_∞ > δ = 0", Relation::Greater, 0);
            let cert = rank_term(rank_term(cert, 1, a, 1, total), -1, a, p, quotient);
            verdict.caveats.push(h2_caveat(p));
            verdict.obstruct(cert);
            return Ok(verdict);
        }
    }
    if a.triple().is_some() {
        let delta = InvariantReport::compute(a)?.delta_sigma.expect("three exponents");
        if delta != 0 {
            let cert = delta_term(
                Certificate::new("δ ≠ 0, so no rational homology ball is bounded", Relation::NotEqual, 0),
                a,
                delta,
            );
            verdict.obstruct(cert);
            return Ok(verdict);
        }
    } else {
        verdict.notes.push("δ is not computed for more than three exponents".to_owned());
    }
    Ok(verdict)
}

/// `(2, 3, 30n+5)` and `p = 5`.
fn in_equality_family(a: &BrieskornExponents, p: u64) -> bool {
    p == 5 && matches!(a.triple(), Some((2, 3, c)) if c >= 35 && c % 30 == 5)
}

/// `Z_p` acting with fixed points, `W` a rational homology ball.
pub fn branched_rational_ball_verdict(total: &BrieskornExponents, p: u64) -> Result<ObstructionVerdict> {
    let bp = branched_pair(total, p)?;
    let mut verdict = ObstructionVerdict::new(Scenario::BranchedRationalBall, vec![total.clone()], p);
    verdict.caveats.push("requires W to be a rational homology 4-ball".to_owned());
    verdict.caveats.push(h2_caveat(p));
    let total_rank = hf_red_rank(total, 1)?;
    let base_rank = hf_red_rank(&bp.base, 1)?;
    let cert = Certificate::new("rk HF_red(Y) > p·rk HF_red(Y/Z_p)", Relation::Greater, 0);
    let cert = rank_term(rank_term(cert, 1, total, 1, total_rank), -(p as i64), &bp.base, 1, base_rank);
    if cert.lhs() < 0 {
        return Err(Error::NegativeBound(cert.lhs()));
    }
    if cert.holds() {
        verdict.obstruct(cert);
    } else if in_equality_family(total, p) {
        verdict.notes.push(format!(
            "{total} with p = 5 lies in the family Σ(2,3,30n+5) where the ranks satisfy rk = 5·rk exactly"
        ));
    }
    Ok(verdict)
}

/// `Z_p` extending homologically trivially over a positive definite `W`.
pub fn positive_definite_verdict(a: &BrieskornExponents, p: u64) -> Result<ObstructionVerdict> {
    a.require_triple()?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a.divisible_by(p) {
        let mut verdict = branched_sum_verdict(std::slice::from_ref(a), p, Scenario::ConnectedSumPositiveDefinite)?;
        verdict.scenario = Scenario::PositiveDefinite;
        return Ok(verdict);
    }
    let mut verdict = ObstructionVerdict::new(Scenario::PositiveDefinite, vec![a.clone()], p);
    verdict.caveats.extend(PD_CAVEATS.iter().map(|s| s.to_string()));
    let delta = InvariantReport::compute(a)?.delta_sigma.expect("three exponents");
    let total = hf_red_rank(a, 1)?;
    let quotient = hf_red_rank(a, p)?;
    // δ_∞ = δ + rk(Y) - rk(Y/Z_p)
    let cert = Certificate::new("δ_∞ > 0", Relation::Greater, 0);
    let cert = rank_term(rank_term(delta_term(cert, a, delta), 1, a, 1, total), -1, a, p, quotient);
    if cert.holds() {
        verdict.obstruct(cert);
    }
    Ok(verdict)
}

/// Equivariant connected sum of summands on each of which `Z_p` has fixed points.
pub fn connected_sum_verdict(
    summands: &[BrieskornExponents],
    p: u64,
    scenario: Scenario,
) -> Result<ObstructionVerdict> {
    match scenario {
        Scenario::ConnectedSumRationalBall | Scenario::ConnectedSumPositiveDefinite => {
            branched_sum_verdict(summands, p, scenario)
        }
        other => Err(Error::UnsupportedScenario(format!("{other:?} is not a connected-sum scenario"))),
    }
}

fn branched_sum_verdict(summands: &[BrieskornExponents], p: u64, scenario: Scenario) -> Result<ObstructionVerdict> {
    if summands.is_empty() {
        return Err(Error::UnsupportedScenario("no summands".to_owned()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if let Some(index) = summands.iter().position(|s| !s.divisible_by(p)) {
        return Err(Error::ActionFreeOnSummand { index, p });
    }
    let positive = scenario == Scenario::ConnectedSumPositiveDefinite;
    let mut verdict = ObstructionVerdict::new(scenario, summands.to_vec(), p);
    if positive {
        verdict.caveats.extend(PD_CAVEATS.iter().map(|s| s.to_string()));
        if summands.len() > 1 {
            verdict.caveats.push("uses additivity of δ under connected sum".to_owned());
        }
    } else {
        verdict.caveats.push("requires W to be a rational homology 4-ball".to_owned());
        verdict.caveats.push(h2_caveat(p));
    }

    let mut sum_cert = Certificate::new(
        if positive {
            "δ(Y) + Σ (rk HF_red(Y_i) - p·rk HF_red(Y_i/Z_p)) > 0"
        } else {
            "rk HF_red(Y_i) > p·rk HF_red(Y_i/Z_p)"
        },
        Relation::Greater,
        0,
    );
    if positive {
        for s in summands {
            let delta = InvariantReport::compute(s)?
                .delta_sigma
                .ok_or_else(|| Error::UnsupportedScenario(format!("δ({s}) needs three exponents")))?;
            sum_cert = delta_term(sum_cert, s, delta);
        }
    }
    for (index, s) in summands.iter().enumerate() {
        let bp = match branched_pair(s, p) {
            Ok(bp) => bp,
            Err(Error::DegenerateBase { .. }) => {
                // the omitted term is a rank, hence non-negative
                verdict.caveats.push(format!(
                    "summand {index} ({s}) has a quotient with fewer than three exponents; its term is omitted"
                ));
                continue;
            }
            Err(e) => return Err(e),
        };
        let total_rank = hf_red_rank(s, 1)?;
        let base_rank = hf_red_rank(&bp.base, 1)?;
        let bound = total_rank as i64 - p as i64 * base_rank as i64;
        if bound < 0 {
            return Err(Error::NegativeBound(bound));
        }
        if positive {
            sum_cert = rank_term(rank_term(sum_cert, 1, s, 1, total_rank), -(p as i64), &bp.base, 1, base_rank);
        } else if bound > 0 && !verdict.is_obstructed() {
            let cert = Certificate::new("rk HF_red(Y_i) > p·rk HF_red(Y_i/Z_p)", Relation::Greater, 0);
            verdict.obstruct(rank_term(rank_term(cert, 1, s, 1, total_rank), -(p as i64), &bp.base, 1, base_rank));
        } else if bound == 0 && in_equality_family(s, p) {
            verdict.notes.push(format!(
                "{s} with p = 5 lies in the family Σ(2,3,30n+5) where the ranks satisfy rk = 5·rk exactly"
            ));
        }
    }
    if positive && sum_cert.holds() {
        verdict.obstruct(sum_cert);
    }
    Ok(verdict)
}
