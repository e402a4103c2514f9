use proptest::prelude::*;

use brieskorn::delta_tau::{delta_at, DeltaStream};
use brieskorn::graded_root::{reduced_rank_by_vertex_count, tower_decomposition_with, TieBreak};
use brieskorn::invariants::{casson, hf_red_rank};
use brieskorn::{
    build_root, kappa, tau_profile, tower_decomposition, BrieskornExponents, InvariantReport, SeifertData, Semigroup,
    TauProfile,
};

const PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

/// Pairwise coprime exponents built from distinct prime powers.
fn coprime_tuple(r: usize, max_product: u64) -> BoxedStrategy<Vec<u64>> {
    (proptest::sample::subsequence(PRIMES.to_vec(), r), proptest::collection::vec(1u32..=3, r), any::<u64>())
        .prop_map(move |(ps, es, shuffle)| {
            let mut v: Vec<u64> = ps.iter().zip(&es).map(|(p, &e)| p.pow(e)).collect();
            v.rotate_left((shuffle % r as u64) as usize);
            v
        })
        .prop_filter("product bound", move |v| {
            v.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x)).is_some_and(|p| p <= max_product)
        })
        .boxed()
}

fn ex(v: &[u64]) -> BrieskornExponents {
    BrieskornExponents::new(v.to_vec()).unwrap()
}

/// Membership in the semigroup generated by `A/a_j`, by exhaustive search.
fn in_semigroup(gens: &[u64], n: u64) -> bool {
    match gens.split_first() {
        None => n == 0,
        Some((&g, rest)) => (0..=n / g).any(|k| in_semigroup(rest, n - k * g)),
    }
}

/// Milnor fiber signature from the exponent sums `Σ j_k/a_k` taken mod 2.
fn milnor_signature(a: u64, b: u64, c: u64) -> i64 {
    let big = a * b * c;
    let mut sig = 0i64;
    for i in 1..a {
        for j in 1..b {
            for k in 1..c {
                let s = (i * b * c + j * a * c + k * a * b) % (2 * big);
                if s < big {
                    sig += 1;
                } else if s > big {
                    sig -= 1;
                }
            }
        }
    }
    sig
}

/// `#{0<x<a, 0<y<b, 0<z<c : x/a + y/b + z/c < 1}` by enumeration.
fn lattice_points(a: u64, b: u64, c: u64) -> u64 {
    let big = a * b * c;
    let mut count = 0;
    for x in 1..a {
        for y in 1..b {
            for z in 1..c {
                count += u64::from(x * b * c + y * a * c + z * a * b < big);
            }
        }
    }
    count
}

fn profile(v: &[u64]) -> TauProfile {
    tau_profile(&SeifertData::new(&ex(v)), 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn casson_matches_milnor_signature(v in coprime_tuple(3, 6_000)) {
        prop_assert_eq!(casson(&ex(&v)).unwrap() * 8, milnor_signature(v[0], v[1], v[2]));
    }

    #[test]
    fn kappa_counts_lattice_points(v in coprime_tuple(3, 20_000)) {
        prop_assert_eq!(kappa(&ex(&v)).unwrap(), lattice_points(v[0], v[1], v[2]));
    }

    #[test]
    fn rank_is_minus_delta_minus_casson(v in coprime_tuple(3, 50_000)) {
        let report = InvariantReport::compute(&ex(&v)).unwrap();
        let lambda = milnor_signature(v[0], v[1], v[2]) / 8;
        prop_assert_eq!(report.hf_red_rank as i64, -report.delta_sigma.unwrap() - lambda);
        prop_assert_eq!(report.j_prime_holds(), Some(true));
    }

    #[test]
    fn semigroup_membership_is_exhaustive_search(v in coprime_tuple(4, 20_000)) {
        let a = ex(&v);
        let sg = Semigroup::build(&a).unwrap();
        let product: u64 = v.iter().product();
        let gens: Vec<u64> = v.iter().map(|x| product / x).collect();
        for (n, &m) in sg.membership().iter().enumerate() {
            prop_assert_eq!(m, in_semigroup(&gens, n as u64), "n = {}", n);
        }
    }

    #[test]
    fn delta_is_the_semigroup_rule(v in coprime_tuple(3, 20_000)) {
        let product: u64 = v.iter().product();
        let gens: Vec<u64> = v.iter().map(|x| product / x).collect();
        let tp = profile(&v);
        let n_max = tp.delta.len() as u64;
        for (n, &d) in tp.delta.iter().enumerate() {
            let n = n as u64;
            let want = if in_semigroup(&gens, n) { 1 } else if in_semigroup(&gens, n_max - 1 - n) { -1 } else { 0 };
            prop_assert_eq!(d, want, "n = {}", n);
        }
    }

    #[test]
    fn three_delta_evaluations_agree(v in coprime_tuple(4, 100_000), p in prop::sample::select(vec![1u64, 29, 31, 37])) {
        let sd = SeifertData::new(&ex(&v));
        let tp = TauProfile::from_formula(&sd, p).unwrap();
        let mut streamed = vec![0i64; tp.delta.len()];
        DeltaStream::new(&sd, p).fill(&mut streamed);
        for (n, (&table, &stream)) in tp.delta.iter().zip(&streamed).enumerate() {
            prop_assert_eq!(table as i64, stream);
            prop_assert_eq!(table as i128, delta_at(&sd, p, n as u64));
        }
    }

    #[test]
    fn scaled_profile_is_a_subsequence(v in coprime_tuple(3, 100_000), p in prop::sample::select(vec![29u64, 31, 37, 41])) {
        let sd = SeifertData::new(&ex(&v));
        let full = TauProfile::from_formula(&sd, 1).unwrap();
        let scaled = TauProfile::from_formula(&sd, p).unwrap();
        let picked: Vec<i32> = full.delta.iter().step_by(p as usize).copied().collect();
        prop_assert_eq!(&scaled.delta[..], &picked[..scaled.delta.len()]);
        if !full.delta.is_empty() {
            prop_assert_eq!(scaled.delta.len(), picked.len());
        }
    }

    #[test]
    fn scaling_never_raises_rank(v in coprime_tuple(4, 200_000), p in prop::sample::select(vec![29u64, 31, 37])) {
        let a = ex(&v);
        prop_assert!(hf_red_rank(&a, p).unwrap() <= hf_red_rank(&a, 1).unwrap());
    }

    #[test]
    fn tau_is_symmetric(v in coprime_tuple(5, 1_000_000)) {
        let tau = profile(&v).tau;
        let end = tau.len() - 1;
        for n in 0..=end {
            prop_assert_eq!(tau[n], tau[end - n]);
        }
    }

    #[test]
    fn tie_break_does_not_change_the_module(v in coprime_tuple(4, 200_000)) {
        let root = build_root(&profile(&v));
        let left = tower_decomposition_with(&root, TieBreak::Leftmost);
        let right = tower_decomposition_with(&root, TieBreak::Rightmost);
        prop_assert_eq!(left.reduced_rank_by_degree(), right.reduced_rank_by_degree());
        prop_assert_eq!(left.canonical_towers(), right.canonical_towers());
    }

    #[test]
    fn degrees_match_vertex_counts(v in coprime_tuple(4, 200_000)) {
        let tp = profile(&v);
        let module = tower_decomposition(&build_root(&tp));
        prop_assert_eq!(module.reduced_rank_by_degree(), reduced_rank_by_vertex_count(&tp.tau));
    }

    #[test]
    fn exponent_order_is_irrelevant(v in coprime_tuple(3, 50_000)) {
        let mut w = v.clone();
        w.reverse();
        let (x, y) = (InvariantReport::compute(&ex(&v)).unwrap(), InvariantReport::compute(&ex(&w)).unwrap());
        prop_assert_eq!(x.hf_red_rank, y.hf_red_rank);
        prop_assert_eq!(x.d_minus_sigma, y.d_minus_sigma);
        prop_assert_eq!(x.module_rel, y.module_rel);
    }

    #[test]
    fn reports_round_trip_through_json(v in coprime_tuple(3, 50_000)) {
        let report = InvariantReport::compute(&ex(&v)).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        prop_assert_eq!(serde_json::from_str::<InvariantReport>(&text).unwrap(), report);
    }
}

proptest! {
    #[test]
    fn seifert_identity_for_longer_tuples(v in coprime_tuple(4, 1 << 50).prop_union(coprime_tuple(5, 1 << 50))) {
        let data = SeifertData::new(&ex(&v));
        prop_assert_eq!(data.cleared_identity(), (-1).into());
        prop_assert!(data.e0 < 0);
        prop_assert!(data.b.iter().zip(data.exponents.as_slice()).all(|(&b, &a)| 0 < b && b < a));
    }
}

#[test]
fn seifert_identity_up_to_a_million() {
    let triples = brieskorn::sweep::coprime_triples(1_000_000);
    assert!(triples.len() > 1_000_000);
    for t in triples {
        let data = SeifertData::new(&ex(&t));
        assert_eq!(data.cleared_identity(), (-1).into(), "{t:?}");
        assert!(data.e0 < 0);
    }
}
