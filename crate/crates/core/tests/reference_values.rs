use num_rational::Ratio;

use brieskorn::delta_tau::{classify_maxima, delta_at, delta_via_semigroup};
use brieskorn::graded_root::u_image_top_degree_check;
use brieskorn::invariants::{
    branched_bound, casson, d_invariant_minus, delta_inf_free_absolute, delta_inf_minus_delta_free, hf_red_rank,
    j_prime_crosscheck, sigma_equivariant, torus_knot_report,
};
use brieskorn::obstruction::{
    branched_rational_ball_verdict, connected_sum_verdict, free_rational_ball_verdict, positive_definite_verdict,
};
use brieskorn::seifert::{branched_pair, free_quotient_data};
use brieskorn::semigroup::{lattice_count_tau1, unique_representation};
use brieskorn::sweep::coprime_triples;
use brieskorn::BrieskornExponents;
use brieskorn::{
    bound_n, build_root, kappa, tau_profile, tower_decomposition, Conclusion, Error, GradedRoot, Scenario, SeifertData,
    Tower, UModule,
};

fn ex(v: &[u64]) -> BrieskornExponents {
    BrieskornExponents::new(v.to_vec()).unwrap()
}

fn sd(v: &[u64]) -> SeifertData {
    SeifertData::new(&ex(v))
}

fn tau(v: &[u64], p: u64) -> Vec<i64> {
    tau_profile(&sd(v), p).unwrap().tau
}

fn module(v: &[u64]) -> UModule {
    tower_decomposition(&build_root(&tau_profile(&sd(v), 1).unwrap()))
}

/// The unique `(e0, b)` with `0 < b_j < a_j` and `A·e0 + Σ b_j·A/a_j = -1`.
fn seifert_by_search(v: &[u64]) -> (i64, Vec<u64>) {
    let big: i64 = v.iter().product::<u64>() as i64;
    let mut found = Vec::new();
    let ranges: Vec<Vec<u64>> = v.iter().map(|&a| (1..a).collect()).collect();
    let mut idx = vec![0usize; v.len()];
    loop {
        let b: Vec<u64> = idx.iter().zip(&ranges).map(|(&i, r)| r[i]).collect();
        let s: i64 = b.iter().zip(v).map(|(&bj, &aj)| bj as i64 * (big / aj as i64)).sum();
        if (s + 1) % big == 0 {
            found.push((-(s + 1) / big, b));
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < ranges[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    assert_eq!(found.len(), 1, "{v:?}");
    found.pop().unwrap()
}

#[test]
fn seifert_data_matches_search() {
    assert_eq!((sd(&[2, 3, 7]).e0, sd(&[2, 3, 7]).b), (-1, vec![1, 1, 1]));
    assert_eq!((sd(&[2, 3, 5]).e0, sd(&[2, 3, 5]).b), (-2, vec![1, 2, 4]));
    for t in coprime_triples(600) {
        let data = sd(&t);
        assert_eq!((data.e0, data.b.clone()), seifert_by_search(&t), "{t:?}");
    }
    for v in [[2u64, 3, 5, 7], [3, 4, 5, 7], [2, 5, 7, 9]] {
        let data = sd(&v);
        assert_eq!((data.e0, data.b.clone()), seifert_by_search(&v));
    }
}

#[test]
fn branched_and_free_quotients() {
    assert_eq!(branched_pair(&ex(&[2, 3, 35]), 5).unwrap().base, ex(&[2, 3, 7]));
    assert_eq!(branched_pair(&ex(&[2, 3, 35]), 7).unwrap().base, ex(&[2, 3, 5]));
    assert_eq!(branched_pair(&ex(&[2, 3, 7]), 5), Err(Error::PrimeDoesNotDivide { p: 5 }));
    let q = free_quotient_data(&sd(&[2, 3, 7]), 5).unwrap();
    assert_eq!((q.e0, q.pairs), (-5, vec![(2, 5), (3, 5), (7, 5)]));
    let q = free_quotient_data(&sd(&[2, 3, 5]), 7).unwrap();
    assert_eq!((q.e0, q.pairs), (-14, vec![(2, 7), (3, 14), (5, 28)]));
    assert_eq!(free_quotient_data(&sd(&[2, 3, 7]), 7), Err(Error::PrimeDividesExponent { p: 7, exponent: 7 }));
}

#[test]
fn bounds_and_semigroups() {
    assert_eq!(bound_n(&ex(&[2, 3, 5])), (-1).into());
    assert_eq!(bound_n(&ex(&[2, 3, 7])), 1.into());
    assert_eq!(bound_n(&ex(&[3, 4, 7])), 23.into());
    for (v, k) in [([2, 3, 5], 0), ([2, 3, 7], 1), ([2, 3, 13], 2)] {
        assert_eq!(kappa(&ex(&v)).unwrap(), k);
    }
    assert_eq!(unique_representation(&ex(&[2, 3, 13]), 6).unwrap(), (0, 0, 1));
    assert_eq!(unique_representation(&ex(&[2, 3, 13]), 0).unwrap(), (0, 0, 0));
    assert_eq!(unique_representation(&ex(&[2, 3, 13]), 5), Err(Error::NotInSemigroup(5)));
    assert_eq!(lattice_count_tau1(&ex(&[2, 3, 5])).unwrap(), 0);
    assert_eq!(lattice_count_tau1(&ex(&[2, 3, 7])).unwrap(), 1);
}

#[test]
fn delta_values() {
    assert_eq!(delta_at(&sd(&[2, 3, 7]), 1, 0), 1);
    assert_eq!(delta_at(&sd(&[2, 3, 7]), 1, 1), -1);
    assert_eq!(delta_at(&sd(&[2, 3, 11]), 5, 1), -1);
    assert_eq!(delta_at(&sd(&[2, 3, 11]), 1, 5), -1);
    let a = ex(&[2, 3, 13]);
    assert_eq!(delta_via_semigroup(&a, 6).unwrap(), 1);
    assert_eq!(delta_via_semigroup(&a, 1).unwrap(), -1);
    assert_eq!(delta_via_semigroup(&a, 3).unwrap(), 0);
}

#[test]
fn tau_sequences() {
    assert_eq!(tau(&[2, 3, 7], 1), vec![0, 1, 0]);
    assert_eq!(tau(&[2, 3, 13], 1), vec![0, 1, 0, 0, 0, 0, 0, 1, 0]);
    assert_eq!(tau(&[2, 3, 13], 5), vec![0, 1, 1]);
    assert_eq!(tau(&[2, 3, 5], 1), vec![0]);
    assert!(*tau(&[2, 7, 13], 1).iter().min().unwrap() <= 0);
}

#[test]
fn maxima() {
    let classify = |v: &[u64]| classify_maxima(&tau_profile(&sd(v), 1).unwrap()).unwrap();
    assert!(classify(&[2, 3, 7]).all_trivial);
    assert!(classify(&[2, 3, 13]).all_trivial);
    assert!(classify(&[3, 4, 13]).all_trivial);
}

#[test]
fn graded_roots() {
    let values = |t: &[i64], maxima: bool| -> Vec<i64> {
        let root = GradedRoot::from_tau(t);
        let picked: Vec<i64> =
            if maxima { root.maxima().map(|e| e.value).collect() } else { root.minima().map(|e| e.value).collect() };
        picked
    };
    assert_eq!((values(&[0, 1, 0], false), values(&[0, 1, 0], true)), (vec![0, 0], vec![1]));
    let t = [0, 1, 0, 0, 0, 0, 0, 1, 0];
    assert_eq!((values(&t, false), values(&t, true)), (vec![0, 0, 0], vec![1, 1]));
    assert_eq!(GradedRoot::from_tau(&[0]).leaf_count(), 1);

    let m = module(&[2, 3, 7]);
    assert_eq!((m.infinite_bottom, m.towers.clone()), (0, vec![Tower { bottom: 0, length: 1 }]));
    let m = module(&[2, 3, 13]);
    assert_eq!(m.canonical_towers(), vec![Tower { bottom: 0, length: 1 }; 2]);
    assert_eq!(m.reduced_rank(), 2);
    assert_eq!(module(&[2, 3, 5]).reduced_rank(), 0);
    for (v, rank) in [([2, 3, 11], 1), ([3, 4, 7], 2), ([2, 3, 5], 0)] {
        assert_eq!(module(&v).reduced_rank(), rank);
    }
    assert_eq!(module(&[2, 3, 7]).top_reduced_degree().unwrap(), 0);
    assert_eq!(module(&[2, 3, 13]).top_reduced_degree().unwrap(), 0);
    let towers = |ts: &[(i64, u64)]| UModule {
        infinite_bottom: -8,
        towers: ts.iter().map(|&(bottom, length)| Tower { bottom, length }).collect(),
    };
    assert!(u_image_top_degree_check(&towers(&[(0, 1), (-4, 2)])).unwrap());
    assert!(!u_image_top_degree_check(&towers(&[(-2, 2)])).unwrap());
}

#[test]
fn casson_and_d() {
    for (v, lambda) in [([2, 3, 5], -1), ([2, 3, 7], -1), ([2, 3, 11], -2)] {
        assert_eq!(casson(&ex(&v)).unwrap(), lambda);
    }
    for (v, d) in [([2, 3, 5], -2), ([2, 3, 7], 0), ([2, 3, 11], -2)] {
        assert_eq!(d_invariant_minus(&ex(&v)).unwrap(), d);
    }
}

#[test]
fn quotient_ranks_and_delta_inf() {
    assert_eq!(hf_red_rank(&ex(&[2, 5, 7]), 1).unwrap(), 2);
    assert_eq!(hf_red_rank(&ex(&[2, 5, 7]), 3).unwrap(), 0);
    assert_eq!(hf_red_rank(&ex(&[2, 5, 9]), 17).unwrap(), 1);
    assert_eq!(delta_inf_minus_delta_free(&ex(&[2, 3, 11]), 5).unwrap(), 0);
    assert_eq!(delta_inf_minus_delta_free(&ex(&[2, 3, 13]), 5).unwrap(), 2);
    assert_eq!(delta_inf_minus_delta_free(&ex(&[2, 3, 7]), 11).unwrap(), 1);
    let one = Ratio::from_integer(1);
    assert_eq!(delta_inf_free_absolute(&ex(&[2, 3, 7]), 11).unwrap(), one);
    assert_eq!(delta_inf_free_absolute(&ex(&[2, 3, 11]), 5).unwrap(), one);
    for p in [7, 11, 13, 17, 19, 23, 29, 31, 37] {
        assert_eq!(delta_inf_free_absolute(&ex(&[2, 3, 5]), p).unwrap(), one);
    }
}

#[test]
fn branched_bounds() {
    let bound = |v: &[u64], p| branched_bound(&branched_pair(&ex(v), p).unwrap()).unwrap();
    assert_eq!(bound(&[2, 3, 35], 5), 0);
    assert_eq!(bound(&[2, 3, 35], 7), 5);
}

#[test]
fn torus_knots() {
    assert_eq!(sigma_equivariant(2, 3, 5).unwrap(), -8);
    assert_eq!(sigma_equivariant(2, 3, 7).unwrap(), -8);
    assert_eq!(sigma_equivariant(3, 4, 5).unwrap(), 8 * casson(&ex(&[3, 4, 5])).unwrap());
    let t = torus_knot_report(2, 3, 7).unwrap();
    assert_eq!((t.j_inv, t.theta), (1, Ratio::from_integer(1)));
    assert_eq!(torus_knot_report(3, 4, 5).unwrap().theta, Ratio::from_integer(3));
    let t = torus_knot_report(3, 5, 2).unwrap();
    assert_eq!(t.j_inv, 2 * kappa(&ex(&[3, 5, 2])).unwrap());
    assert_eq!(t.theta, Ratio::from_integer(4));
    assert!(torus_knot_report(2, 4, 3).is_err());
    for v in [[2, 3, 7], [2, 3, 13], [2, 3, 5]] {
        assert!(j_prime_crosscheck(&ex(&v)).unwrap());
    }
}

#[test]
fn verdicts() {
    let v = free_rational_ball_verdict(&ex(&[2, 3, 13]), 5).unwrap();
    assert!(v.is_obstructed());
    assert_eq!(v.certificate.as_ref().unwrap().lhs(), 2);
    let v = free_rational_ball_verdict(&ex(&[2, 3, 11]), 5).unwrap();
    assert!(v.is_obstructed());
    assert_eq!(v.certificate.as_ref().unwrap().terms[0].value, 1);
    assert!(matches!(free_rational_ball_verdict(&ex(&[2, 3, 7]), 6), Err(Error::UnsupportedScenario(_))));

    assert!(branched_rational_ball_verdict(&ex(&[2, 3, 35]), 7).unwrap().is_obstructed());
    let v = branched_rational_ball_verdict(&ex(&[2, 3, 35]), 5).unwrap();
    assert_eq!(v.conclusion, Conclusion::NotObstructedByTheseCriteria);
    let rank_345 = hf_red_rank(&ex(&[3, 4, 5]), 1).unwrap();
    assert_eq!(rank_345, 2);
    assert_eq!(branched_rational_ball_verdict(&ex(&[4, 3, 5]), 2).unwrap().is_obstructed(), rank_345 > 0);

    for (v, p) in [([2, 3, 7], 11), ([2, 3, 5], 7)] {
        let verdict = positive_definite_verdict(&ex(&v), p).unwrap();
        assert!(verdict.is_obstructed());
        assert_eq!(verdict.certificate.as_ref().unwrap().lhs(), 1);
        assert!(verdict.certificate.as_ref().unwrap().verify().unwrap());
    }
    let v = positive_definite_verdict(&ex(&[2, 3, 7]), 2).unwrap();
    assert_eq!(v.conclusion, Conclusion::NotObstructedByTheseCriteria);

    let sums = [ex(&[2, 3, 35]), ex(&[2, 5, 7])];
    let v = connected_sum_verdict(&sums, 5, Scenario::ConnectedSumRationalBall).unwrap();
    if let Some(cert) = &v.certificate {
        assert!(cert.verify().unwrap());
    }
    assert_eq!(
        connected_sum_verdict(&[ex(&[2, 3, 7])], 5, Scenario::ConnectedSumRationalBall),
        Err(Error::ActionFreeOnSummand { index: 0, p: 5 })
    );
}
