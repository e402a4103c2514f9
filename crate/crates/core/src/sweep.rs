//! Parameter sweeps over coprime triples.
//!
//! Each triple is processed in one pass: a single `Δ` stream feeds the tau
//! checks, the graded root and the semigroup comparison. Branched checks
//! run afterwards against the table of ranks gathered in that pass.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::primes_between;
use crate::delta_tau::{classify_maxima_tau, fill_delta, is_maxima_exception, DeltaStream};
use crate::error::{Error, Result};
use crate::graded_root::{
    reduced_rank_by_vertex_count, tower_decomposition, tower_decomposition_with, GradedRoot, TieBreak,
};
use crate::invariants::{casson_from_kappa, d_minus_from_parts, torus_knot_report};
use crate::seifert::{branched_pair, BrieskornExponents, SeifertData};
use crate::semigroup::{bound_n, lattice_count_tau1, Semigroup};

/// Entries of `Δ_p` checked for non-negativity past `N/p`.
pub const DELTA_WINDOW: usize = 256;

/// Pairwise coprime `2 <= a < b < c` with `abc <= max_product`, in lexicographic order.
pub fn coprime_triples(max_product: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    let mut a = 2;
    while a * (a + 1) * (a + 2) <= max_product {
        let mut b = a + 1;
        while a * b * (b + 1) <= max_product {
            if a.gcd(&b) == 1 {
                for c in b + 1..=max_product / (a * b) {
                    if a.gcd(&c) == 1 && b.gcd(&c) == 1 {
                        out.push([a, b, c]);
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `θ^(c)(T_{a,b})` against `(a-1)(b-1)/2`.
    Theta,
    /// Rank drops under free quotients, and where they fail to.
    Exceptions,
    /// Non-negativity of the branched bound.
    Kl,
    /// `κ`, `λ`, `d` and the semigroup description of `Δ`.
    Kappa,
    /// Shape of `Δ`, `τ` and the tower decomposition.
    Symmetry,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Theta, Check::Exceptions, Check::Kl, Check::Kappa, Check::Symmetry];

    pub fn name(self) -> &'static str {
        match self {
            Check::Theta => "theta",
            Check::Exceptions => "exceptions",
            Check::Kl => "kl",
            Check::Kappa => "kappa",
            Check::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub property: String,
    pub subject: String,
    pub detail: String,
}

/// A free quotient whose rank equals that of the total space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EqualityCase {
    pub exponents: [u64; 3],
    pub p: u64,
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub max_product: u64,
    /// Inclusive prime range.
    pub primes: (u64, u64),
    pub checks: BTreeSet<Check>,
    /// Zero means one worker per core.
    pub workers: usize,
    /// Tie-break and vertex-count comparisons only run up to this product.
    pub tie_break_max_product: u64,
}

impl ScanConfig {
    pub fn new(max_product: u64, primes: (u64, u64), checks: impl IntoIterator<Item = Check>) -> Self {
        Self { max_product, primes, checks: checks.into_iter().collect(), workers: 0, tie_break_max_product: 10_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub max_product: u64,
    pub primes: (u64, u64),
    pub checks: Vec<Check>,
    pub triples: u64,
    /// Instances examined per property.
    pub evaluations: BTreeMap<String, u64>,
    pub equalities: Vec<EqualityCase>,
    pub violations: Vec<Violation>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_for(&self, check: Check) -> impl Iterator<Item = &Violation> + '_ {
        self.violations.iter().filter(move |v| v.check == check)
    }
}

#[derive(Default)]
struct Tally {
    evaluations: BTreeMap<&'static str, u64>,
    violations: Vec<Violation>,
}

impl Tally {
    fn check(
        &mut self,
        check: Check,
        property: &'static str,
        ok: bool,
        subject: impl fmt::Display,
        detail: impl FnOnce() -> String,
    ) {
        *self.evaluations.entry(property).or_default() += 1;
        if !ok {
            self.violations.push(Violation {
                check,
                property: property.to_owned(),
                subject: subject.to_string(),
                detail: detail(),
            });
        }
    }

    fn merge(&mut self, other: Tally) {
        for (k, v) in other.evaluations {
            *self.evaluations.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
    }
}

struct TripleRecord {
    key: [u64; 3],
    rank: u64,
    equalities: Vec<EqualityCase>,
    tally: Tally,
}

/// Base stream length past `N`, so that every scaled window fits.
const STREAM_TAIL: usize = 4 * DELTA_WINDOW;

/// Entries of `Δ_p` compared against a fresh stream with step `p`.
const SCALED_PREFIX: usize = 64;

fn rank_of(tau: &[i64]) -> u64 {
    tower_decomposition(&GradedRoot::from_tau(tau)).reduced_rank()
}

fn analyze(key: [u64; 3], cfg: &ScanConfig, primes: &[u64]) -> Result<TripleRecord> {
    let ex = BrieskornExponents::new(key.to_vec())?;
    let sd = SeifertData::new(&ex);
    let want = |c: Check| cfg.checks.contains(&c);
    let mut tally = Tally::default();
    let mut equalities = Vec::new();
    let product = key[0] * key[1] * key[2];
    let free_primes = primes.iter().copied().filter(|&p| !product.is_multiple_of(p));

    let Some(n) = bound_n(&ex).to_u64() else {
        // Σ(2,3,5): empty profile, every quotient has rank 0 too
        if want(Check::Exceptions) {
            for p in free_primes {
                let rank_p = rank_of(&[0]);
                tally.check(Check::Exceptions, "subsequence-monotone", true, &ex, String::new);
                if rank_p == 0 {
                    equalities.push(EqualityCase { exponents: key, p, rank: 0 });
                }
            }
        }
        if want(Check::Kappa) {
            let kappa = Semigroup::build(&ex)?.count();
            tally.check(Check::Kappa, "kappa-tau1", kappa == lattice_count_tau1(&ex)?, &ex, || "κ ≠ τ₁".into());
            tally.check(Check::Kappa, "casson-integrality", casson_from_kappa(&ex, kappa).is_ok(), &ex, String::new);
        }
        return Ok(TripleRecord { key, rank: 0, equalities, tally });
    };

    let n_us = n as usize;
    SCRATCH
        .with_borrow_mut(|scratch| analyze_profile(key, &ex, &sd, n_us, cfg, free_primes, tally, equalities, scratch))
}

thread_local! {
    static SCRATCH: std::cell::RefCell<Scratch> = const { std::cell::RefCell::new(Scratch::new()) };
}

/// Per-worker buffers reused across triples.
struct Scratch {
    delta: Vec<i64>,
    tau: Vec<i64>,
    tau_p: Vec<i64>,
}

impl Scratch {
    const fn new() -> Self {
        Self { delta: Vec::new(), tau: Vec::new(), tau_p: Vec::new() }
    }
}

/// `τ` of the sequence `delta[0], delta[step], ...` through index `last·step`.
fn prefix_sums_into(delta: &[i64], step: usize, last: usize, out: &mut Vec<i64>) {
    out.clear();
    out.push(0);
    let mut acc = 0;
    for &d in delta.iter().step_by(step).take(last + 1) {
        acc += d;
        out.push(acc);
    }
}

#[allow(clippy::too_many_arguments)]
fn analyze_profile(
    key: [u64; 3],
    ex: &BrieskornExponents,
    sd: &SeifertData,
    n_us: usize,
    cfg: &ScanConfig,
    free_primes: impl Iterator<Item = u64>,
    mut tally: Tally,
    mut equalities: Vec<EqualityCase>,
    scratch: &mut Scratch,
) -> Result<TripleRecord> {
    let Scratch { delta, tau, tau_p } = scratch;
    let want = |c: Check| cfg.checks.contains(&c);
    let product = key[0] * key[1] * key[2];
    delta.clear();
    delta.resize(n_us + 1 + STREAM_TAIL, 0);
    fill_delta(sd, 1, delta);
    prefix_sums_into(delta, 1, n_us, tau);
    let tau = &tau[..];
    let root = GradedRoot::from_tau(tau);
    let module = tower_decomposition(&root);
    let rank = module.reduced_rank();
    let min_tau = *tau.iter().min().expect("non-empty");

    if want(Check::Symmetry) {
        let range_ok = delta[..=n_us].iter().all(|d| (-1..=1).contains(d));
        tally.check(Check::Symmetry, "delta-range", range_ok, ex, || "Δ leaves {-1,0,1}".into());
        let sym_bad = (0..=n_us.div_ceil(2)).find(|&i| tau[n_us + 1 - i] != tau[i]);
        tally.check(Check::Symmetry, "tau-symmetry", sym_bad.is_none(), ex, || {
            format!("τ(N+1-n) ≠ τ(n) at n = {}", sym_bad.unwrap())
        });
        let window_bad = delta[n_us + 1..n_us + 1 + DELTA_WINDOW].iter().position(|&d| d < 0);
        tally.check(Check::Symmetry, "delta-window", window_bad.is_none(), ex, || {
            format!("Δ < 0 at n = {}", n_us + 1 + window_bad.unwrap())
        });
        let cls = classify_maxima_tau(tau);
        let max_ok = cls.max_value <= 1 && (cls.all_trivial || is_maxima_exception(ex));
        tally.check(Check::Symmetry, "tau-max", max_ok, ex, || format!("{cls:?}"));
        if cls.all_trivial && rank > 0 {
            let ok = module.top_degree_outside_u_image().unwrap_or(false);
            tally.check(Check::Symmetry, "u-image", ok, ex, || "top degree meets the image of U".into());
        }
        let towers_ok = module.towers.iter().all(|t| t.bottom >= 2 * min_tau && t.top() <= 0 && t.bottom % 2 == 0);
        tally.check(Check::Symmetry, "tower-bounds", towers_ok, ex, || format!("{:?}", module.towers));
        if product <= cfg.tie_break_max_product {
            let left = module.reduced_rank_by_degree();
            let right = tower_decomposition_with(&root, TieBreak::Rightmost).reduced_rank_by_degree();
            tally.check(Check::Symmetry, "tie-break", left == right, ex, || format!("{left:?} vs {right:?}"));
            let direct = reduced_rank_by_vertex_count(tau);
            tally.check(Check::Symmetry, "vertex-count", left == direct, ex, || format!("{left:?} vs {direct:?}"));
        }
    }

    if want(Check::Kappa) || want(Check::Symmetry) {
        let g = Semigroup::build(ex)?;
        let kappa = g.count();
        if want(Check::Kappa) {
            let members = g.membership();
            let rule = |m: usize| if members[m] { 1 } else { -i64::from(members[n_us - m]) };
            let rule_bad = (0..=n_us).find(|&m| rule(m) != delta[m]);
            tally.check(Check::Kappa, "delta-rule", rule_bad.is_none(), ex, || {
                format!("ceiling formula and semigroup rule differ at n = {}", rule_bad.unwrap())
            });
            let tau1 = lattice_count_tau1(ex)?;
            tally.check(Check::Kappa, "kappa-tau1", kappa == tau1, ex, || format!("κ = {kappa}, τ₁ = {tau1}"));
        }
        match casson_from_kappa(ex, kappa) {
            Err(e) => tally.check(Check::Kappa, "casson-integrality", false, ex, || e.to_string()),
            Ok(lambda) => {
                tally.check(Check::Kappa, "casson-integrality", true, ex, String::new);
                let d = d_minus_from_parts(kappa, lambda, min_tau);
                if want(Check::Symmetry) {
                    tally.check(Check::Symmetry, "d-parity", matches!(d, Ok(d) if d % 2 == 0), ex, || format!("{d:?}"));
                }
                if let (true, Ok(d)) = (want(Check::Kappa), d) {
                    // rk = -δ(Σ) - λ(Σ) with δ(Σ) = -d(-Σ)/2
                    let rhs = d / 2 - lambda;
                    tally.check(Check::Kappa, "rank-identity", rank as i64 == rhs, ex, || {
                        format!("rank {rank} ≠ {rhs}")
                    });
                    let ok = match module.top_reduced_degree() {
                        Err(_) => true,
                        Ok(top) => {
                            let ell = top + d - 2 * min_tau;
                            ell % 2 == 0 && ell / 2 - lambda == kappa as i64
                        }
                    };
                    tally.check(Check::Kappa, "j-prime", ok, ex, || "ℓ⁺/2 + λ(-Σ) ≠ κ".into());
                }
            }
        }
    }

    if want(Check::Exceptions) {
        for p in free_primes {
            // Δ_p(n) = Δ(np)
            let step = p as usize;
            let np = n_us / step;
            let prefix = SCALED_PREFIX.min(np + 1);
            let mut fresh = vec![0i64; prefix];
            DeltaStream::new(sd, p).fill(&mut fresh);
            let sub_ok = fresh.iter().zip(delta.iter().step_by(step)).all(|(f, d)| f == d);
            tally.check(Check::Exceptions, "scaled-subsequence", sub_ok, ex, || format!("Δ_{p}(n) ≠ Δ(np)"));
            let window_ok = delta.iter().step_by(step).skip(np + 1).take(DELTA_WINDOW).all(|&d| d >= 0);
            tally.check(Check::Exceptions, "delta-window", window_ok, ex, || format!("Δ_{p} < 0 past N/p"));
            prefix_sums_into(delta, step, np, tau_p);
            let rank_p = rank_of(tau_p);
            tally.check(Check::Exceptions, "subsequence-monotone", rank_p <= rank, ex, || {
                format!("p = {p}: quotient rank {rank_p} > {rank}")
            });
            if rank_p == rank {
                equalities.push(EqualityCase { exponents: key, p, rank });
            }
        }
    }

    Ok(TripleRecord { key, rank, equalities, tally })
}

fn in_exception_set(e: &EqualityCase) -> bool {
    match e.exponents {
        [2, 3, 5] => e.rank == 0,
        [2, 3, 11] => e.p == 5 && e.rank == 1,
        _ => false,
    }
}

/// Runs every requested check over `cfg`.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::UnsupportedScenario(format!("worker pool: {e}")))?;
    pool.install(|| scan_in_pool(cfg))
}

fn scan_in_pool(cfg: &ScanConfig) -> Result<ScanReport> {
    let primes = primes_between(cfg.primes.0, cfg.primes.1);
    let mut tally = Tally::default();
    let mut report = ScanReport {
        max_product: cfg.max_product,
        primes: cfg.primes,
        checks: cfg.checks.iter().copied().collect(),
        ..ScanReport::default()
    };

    let triple_checks = [Check::Exceptions, Check::Kl, Check::Kappa, Check::Symmetry];
    if triple_checks.iter().any(|c| cfg.checks.contains(c)) {
        let triples = coprime_triples(cfg.max_product);
        report.triples = triples.len() as u64;
        let records: Vec<TripleRecord> =
            triples.par_iter().map(|&key| analyze(key, cfg, &primes)).collect::<Result<_>>()?;
        let ranks: HashMap<[u64; 3], u64> = records.iter().map(|r| (r.key, r.rank)).collect();

        if cfg.checks.contains(&Check::Kl) {
            let kl: Vec<Tally> = records.par_iter().map(|r| kl_checks(r, &ranks, &primes)).collect::<Result<_>>()?;
            kl.into_iter().for_each(|t| tally.merge(t));
        }
        for r in records {
            tally.merge(r.tally);
            report.equalities.extend(r.equalities);
        }
        if cfg.checks.contains(&Check::Exceptions) {
            for e in &report.equalities {
                tally.check(
                    Check::Exceptions,
                    "exception-set",
                    in_exception_set(e),
                    format!("{:?}", e.exponents),
                    || format!("p = {}: rank {} equals the quotient rank", e.p, e.rank),
                );
            }
        }
    }

    if cfg.checks.contains(&Check::Theta) {
        let pairs: Vec<(u64, u64)> = (2..)
            .take_while(|a| a * (a + 1) * 2 <= cfg.max_product)
            .flat_map(|a| (a + 1..=cfg.max_product / (2 * a)).map(move |b| (a, b)))
            .filter(|&(a, b)| a.gcd(&b) == 1)
            .collect();
        let theta: Vec<Tally> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let cs: Vec<u64> = primes.iter().copied().filter(|&c| a * b * c <= cfg.max_product).collect();
                theta_checks(a, b, &cs)
            })
            .collect::<Result<_>>()?;
        theta.into_iter().for_each(|t| tally.merge(t));
    }

    report.evaluations = tally.evaluations.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
    tally.violations.sort();
    report.violations = tally.violations;
    report.equalities.sort();
    Ok(report)
}

fn kl_checks(r: &TripleRecord, ranks: &HashMap<[u64; 3], u64>, primes: &[u64]) -> Result<Tally> {
    let mut tally = Tally::default();
    let ex = BrieskornExponents::new(r.key.to_vec())?;
    for &p in primes.iter().filter(|&&p| ex.divisible_by(p)) {
        let bp = match branched_pair(&ex, p) {
            Ok(bp) => bp,
            Err(Error::DegenerateBase { .. }) => continue,
            Err(e) => return Err(e),
        };
        let key: [u64; 3] = bp.base.as_slice().try_into().expect("three exponents");
        let base_rank = match ranks.get(&key) {
            Some(&rank) => rank,
            None => crate::invariants::hf_red_rank(&bp.base, 1)?,
        };
        let bound = r.rank as i64 - p as i64 * base_rank as i64;
        tally.check(Check::Kl, "kl-bound", bound >= 0, &ex, || format!("p = {p}: bound {bound}"));
    }
    Ok(tally)
}

fn theta_checks(a: u64, b: u64, primes: &[u64]) -> Result<Tally> {
    let mut tally = Tally::default();
    for &c in primes.iter().filter(|&&c| !(a * b).is_multiple_of(c)) {
        let report = torus_knot_report(a, b, c)?;
        tally.check(Check::Theta, "theta", report.theta_matches_genus, format!("T({a},{b}), c = {c}"), || {
            format!("θ = {}, expected {}", report.theta, report.milnor_genus)
        });
    }
    Ok(tally)
}

/// Theta comparison over all coprime `1 < a < b <= max_b` and the given primes.
pub fn theta_sweep(max_b: u64, primes: &[u64]) -> Result<ScanReport> {
    let mut tally = Tally::default();
    for a in 2..max_b {
        for b in a + 1..=max_b {
            if a.gcd(&b) == 1 {
                tally.merge(theta_checks(a, b, primes)?);
            }
        }
    }
    Ok(ScanReport {
        checks: vec![Check::Theta],
        evaluations: tally.evaluations.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        violations: tally.violations,
        ..ScanReport::default()
    })
}
