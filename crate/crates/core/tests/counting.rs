mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teleskope_core::combinat::{Counter, Engine};
use teleskope_core::metric::{genericity_gap, signed_sum};
use teleskope_core::{LengthVector, Scalar, SubsetMask, TelescopicData};

fn engines() -> [Counter; 3] {
    [
        Counter::new(Engine::Enumerate),
        Counter::new(Engine::SubsetSumDp),
        Counter::default(),
    ]
}

#[test]
fn counts_match_brute_force_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let a = common::any_instance(&mut rng, 3..=9);
        let (minus, plus) = common::endpoints(&a);
        let n = a.n() as i64;
        for counter in engines() {
            let alpha_m = counter.alpha_table(&a.lower()).unwrap();
            let alpha_p = counter.alpha_table(&a.upper()).unwrap();
            let beta_pm = counter.beta_table(&a.upper(), &a.lower()).unwrap();
            let beta_mp = counter.beta_table(&a.lower(), &a.upper()).unwrap();
            let a_m = counter.a_fixed_table(&a.lower()).unwrap();
            for k in -1..=n {
                assert_eq!(alpha_m.get(k), common::alpha(&minus, k), "{a:?} k={k}");
                assert_eq!(alpha_p.get(k), common::alpha(&plus, k), "{a:?} k={k}");
                assert_eq!(beta_pm.get(k), common::beta(&plus, &minus, k), "{a:?} k={k}");
                assert_eq!(beta_mp.get(k), common::beta(&minus, &plus, k), "{a:?} k={k}");
                assert_eq!(a_m.get(k), common::a_fixed(&minus, k), "{a:?} k={k}");
            }
        }
    }
}

#[test]
fn dual_counting_of_alpha() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let a = common::any_instance(&mut rng, 3..=10);
        for l in [a.lower(), a.upper()] {
            let table = teleskope_core::combinat::alpha_table(&l).unwrap();
            let ql = common::ql(&l);
            for k in 0..=l.len() as i64 - 2 {
                assert_eq!(table.get(k), common::alpha_dual(&ql, k), "{l} k={k}");
            }
        }
    }
}

#[test]
fn symmetry_domination_and_vanishing() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let a = common::any_instance(&mut rng, 3..=12);
        let (m, p) = (a.lower(), a.upper());
        let n = a.n() as i64;
        let counter = Counter::default();
        let beta_pm = counter.beta_table(&p, &m).unwrap();
        let beta_mp = counter.beta_table(&m, &p).unwrap();
        let alpha_m = counter.alpha_table(&m).unwrap();
        for k in 0..=n - 2 {
            assert_eq!(beta_pm.get(k), beta_mp.get(n - 2 - k), "{a:?} k={k}");
            assert!(alpha_m.get(k) >= beta_pm.get(k), "{a:?} k={k}");
        }
        let two = Scalar::from_integer(2);
        if &(a.lo() + a.hi()) >= &(&two * a.fixed().get(a.n() - 1)) {
            assert!(beta_pm.values.iter().all(|&b| b == 0), "{a:?}");
            assert!(beta_mp.values.iter().all(|&b| b == 0), "{a:?}");
        }
    }
}

#[test]
fn fixed_length_reduction() {
    // alpha(l, k) - beta(l, l, k) = a_k(l)
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(3..=10);
        let mut v: Vec<Scalar> = (0..n).map(|_| common::length(&mut rng, 2000)).collect();
        let last = v.pop().unwrap();
        v.sort();
        v.push(last);
        let l = LengthVector::new(v).unwrap();
        if !common::generic(&common::ql(&l)) {
            continue;
        }
        checked += 1;
        for k in 0..=n as i64 - 2 {
            let lhs = teleskope_core::combinat::alpha(&l, k).unwrap() as i64
                - teleskope_core::combinat::beta(&l, &l, k).unwrap() as i64;
            assert_eq!(lhs, teleskope_core::combinat::a_fixed(&l, k).unwrap() as i64, "{l} k={k}");
        }
    }
}

#[test]
fn a_fixed_does_not_depend_on_which_longest_leg() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(3..=9);
        let mut v: Vec<Scalar> = (0..n - 1).map(|_| common::length(&mut rng, 1000)).collect();
        let top = v.iter().max().unwrap().clone();
        v.push(top);
        let l = common::ql(&LengthVector::new(v).unwrap());
        if !common::generic(&l) {
            continue;
        }
        checked += 1;
        let max = l.iter().max().unwrap();
        let tied: Vec<usize> = (0..n).filter(|&i| &l[i] == max).collect();
        assert!(tied.len() >= 2);
        for k in 0..=n as i64 - 2 {
            let first = common::a_fixed_at(&l, k, tied[0]);
            for &i in &tied[1..] {
                assert_eq!(common::a_fixed_at(&l, k, i), first);
            }
        }
    }
}

#[test]
fn spec_count_tables() {
    let table = |s: &str| teleskope_core::combinat::alpha_table(&LengthVector::parse(s).unwrap()).unwrap();
    assert_eq!(table("4,8,10,1").values, vec![1, 3, 0]);
    let l = LengthVector::parse("1,2,4,8").unwrap();
    let ql = common::ql(&l);
    assert_eq!(
        table("1,2,4,8").values,
        (0..=2).map(|k| common::alpha(&ql, k)).collect::<Vec<_>>()
    );
    // (3,4,5,6) sits on the wall 3 + 6 = 4 + 5
    let wall = LengthVector::parse("3,4,5,6").unwrap();
    assert!(teleskope_core::combinat::beta_table(&wall, &wall)
        .unwrap_err()
        .is_non_generic());
    let l = LengthVector::parse("3,4,5,7").unwrap();
    let ql = common::ql(&l);
    let beta = teleskope_core::combinat::beta_table(&l, &l).unwrap();
    assert_eq!(
        beta.values,
        (0..=2).map(|k| common::beta(&ql, &ql, k)).collect::<Vec<_>>()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dp_engine_matches_enumeration(raw in prop::collection::vec(1u32..60, 3..=20)) {
        let l = LengthVector::new(raw.iter().map(|&x| Scalar::from_integer(x as i64)).collect()).unwrap();
        let generic = genericity_gap(&l).unwrap().is_positive();
        let dp = Counter::new(Engine::SubsetSumDp);
        let bf = Counter::new(Engine::Enumerate);
        if generic {
            prop_assert_eq!(dp.alpha_table(&l).unwrap(), bf.alpha_table(&l).unwrap());
            prop_assert_eq!(dp.a_fixed_table(&l).unwrap(), bf.a_fixed_table(&l).unwrap());
            prop_assert_eq!(dp.beta_table(&l, &l).unwrap(), bf.beta_table(&l, &l).unwrap());
        } else {
            prop_assert!(dp.alpha_table(&l).unwrap_err().is_non_generic());
        }
    }

    #[test]
    fn signed_sum_is_antisymmetric(raw in prop::collection::vec(1u32..1000, 1..=16), bits in any::<u64>()) {
        let n = raw.len();
        let l = LengthVector::new(raw.iter().map(|&x| Scalar::from_ratio(x as i64, 7)).collect()).unwrap();
        let j = SubsetMask::from_bits(n, bits & ((1 << n) - 1)).unwrap();
        let s = signed_sum(&l, &j).unwrap();
        prop_assert_eq!(signed_sum(&l, &j.complement()).unwrap(), -s.clone());
        if !s.is_zero() {
            let long = teleskope_core::metric::is_long(&l, &j).unwrap();
            prop_assert_eq!(long, teleskope_core::metric::is_short(&l, &j.complement()).unwrap());
        }
    }

    #[test]
    fn gap_matches_brute_force(raw in prop::collection::vec(1u32..500, 1..=16)) {
        let l = LengthVector::new(raw.iter().map(|&x| Scalar::from_ratio(x as i64, 4)).collect()).unwrap();
        let expected = common::gap(&common::ql(&l));
        prop_assert_eq!(common::q(&genericity_gap(&l).unwrap()), expected);
    }

    #[test]
    fn gap_is_permutation_invariant(raw in prop::collection::vec(1u32..500, 2..=14), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<Scalar> = raw.iter().map(|&x| Scalar::from_ratio(x as i64, 3)).collect();
        let mut shuffled = values.clone();
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        let a = genericity_gap(&LengthVector::new(values).unwrap()).unwrap();
        let b = genericity_gap(&LengthVector::new(shuffled).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn odd_integer_total_is_generic(raw in prop::collection::vec(1u32..100, 1..=18)) {
        let total: u32 = raw.iter().sum();
        prop_assume!(total % 2 == 1);
        let l = LengthVector::new(raw.iter().map(|&x| Scalar::from_integer(x as i64)).collect()).unwrap();
        prop_assert!(genericity_gap(&l).unwrap() >= Scalar::one());
    }
}

#[test]
fn large_gap_strategies_match_a_subset_sum_reference() {
    // 26 to 34 legs: past direct enumeration
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for round in 0..6 {
        let n = 26 + round;
        let raw: Vec<u64> = (0..n).map(|_| rng.gen_range(1..400)).collect();
        let total: u64 = raw.iter().sum();
        let mut reach = vec![false; total as usize + 1];
        reach[0] = true;
        for &w in &raw {
            for s in (w as usize..=total as usize).rev() {
                reach[s] |= reach[s - w as usize];
            }
        }
        // |2s - total| minimized over reachable s
        let expected = (0..=total as i64)
            .filter(|&s| reach[s as usize])
            .map(|s| (2 * s - total as i64).abs())
            .min()
            .unwrap();
        let l = LengthVector::new(raw.iter().map(|&x| Scalar::from_integer(x as i64)).collect()).unwrap();
        assert_eq!(genericity_gap(&l).unwrap(), Scalar::from_integer(expected), "n={n}");
        // a common denominator too large for the reachability table
        let scaled = LengthVector::new(
            raw.iter()
                .map(|&x| &Scalar::from_integer(x as i64) + &Scalar::from_ratio(1, 1 << 40))
                .collect(),
        )
        .unwrap();
        // every signed sum moved by at most n / 2^40
        let gap = genericity_gap(&scaled).unwrap();
        let drift = (&gap - &Scalar::from_integer(expected)).abs();
        assert!(drift <= Scalar::from_ratio(n as i64, 1 << 40), "n={n}");
        let (witness_gap, witness) = teleskope_core::metric::gap_witness(&scaled).unwrap();
        assert_eq!(signed_sum(&scaled, &witness).unwrap(), witness_gap);
    }
}

#[test]
fn telescopic_genericity_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let n = rng.gen_range(3..=8);
        let mut fixed: Vec<Scalar> = (0..n - 1).map(|_| Scalar::from_integer(rng.gen_range(1..6))).collect();
        fixed.sort();
        let lo = Scalar::from_ratio(rng.gen_range(1..20), 2);
        let hi = &lo + &Scalar::from_ratio(rng.gen_range(1..20), 2);
        let a = TelescopicData::new(LengthVector::new(fixed).unwrap(), lo, hi).unwrap();
        let (m, p) = common::endpoints(&a);
        assert_eq!(
            teleskope_core::metric::is_generic(&a),
            common::generic(&m) && common::generic(&p),
            "{a:?}"
        );
    }
}
