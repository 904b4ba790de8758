use are_lab::rank_stats::{concordance_counts, h2_kernel};
use are_lab::{kendall_t, ranks, spearman_s, spearman_u_tilde, Error, PairedSample};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn distinct_pairs(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    (3..max).prop_flat_map(|n| {
        (
            Just(n),
            proptest::sample::subsequence((0..10_000).collect::<Vec<i32>>(), n),
            proptest::sample::subsequence((0..10_000).collect::<Vec<i32>>(), n),
        )
            .prop_flat_map(|(_, xs, ys)| {
                let ys = Just(ys).prop_shuffle();
                (Just(xs), ys)
            })
            .prop_map(|(xs, ys)| xs.into_iter().zip(ys).map(|(x, y)| (x as f64 / 7.0, y as f64 / 3.0)).collect())
    })
}

fn sample(p: Vec<(f64, f64)>) -> PairedSample {
    PairedSample::from_pairs(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn monotone_maps_leave_statistics_unchanged(p in distinct_pairs(60)) {
        let s = sample(p.clone());
        let mapped = sample(p.iter().map(|&(x, y)| (x.powi(3) + 2.0 * x, (y * 0.01).exp())).collect());
        prop_assert_eq!(kendall_t(&s).unwrap(), kendall_t(&mapped).unwrap());
        prop_assert_eq!(spearman_s(&s).unwrap(), spearman_s(&mapped).unwrap());
    }

    #[test]
    fn negating_y_flips_signs(p in distinct_pairs(60)) {
        let s = sample(p.clone());
        let neg = sample(p.iter().map(|&(x, y)| (x, -y)).collect());
        prop_assert_eq!(kendall_t(&s).unwrap(), -kendall_t(&neg).unwrap());
        prop_assert!((spearman_s(&s).unwrap() + spearman_s(&neg).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn ranges(p in distinct_pairs(80)) {
        let s = sample(p);
        let t = kendall_t(&s).unwrap();
        let r = spearman_s(&s).unwrap();
        let u = spearman_u_tilde(&s).unwrap();
        prop_assert!((-1.0..=1.0).contains(&t));
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert!((0.0..=6.0).contains(&u));
        let (c, d) = concordance_counts(&s).unwrap();
        prop_assert_eq!(t == 1.0, d == 0);
        prop_assert_eq!(c + d, (s.len() * (s.len() - 1) / 2) as u64);
    }

    #[test]
    fn ranks_are_a_permutation(v in proptest::collection::hash_set(-1000i32..1000, 1..100)) {
        let v: Vec<f64> = v.into_iter().map(f64::from).collect();
        let r = ranks(&v).unwrap().into_vec();
        let mut sorted = r.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..=v.len()).collect::<Vec<_>>());
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let at = v.iter().position(|&x| x == min).unwrap();
        prop_assert_eq!(r[at], 1);
    }
}

#[test]
fn ranks_match_counting_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
    let r = ranks(&v).unwrap();
    for (i, &ri) in r.as_slice().iter().enumerate() {
        let below = v.iter().filter(|&&x| x < v[i]).count();
        assert_eq!(ri, below + 1);
    }
}

#[test]
fn h2_matches_indicator_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let p: (f64, f64) = (rng.random(), rng.random());
        let q: (f64, f64) = (rng.random(), rng.random());
        let i = i8::from(p.0 > q.0);
        let j = i8::from(p.1 > q.1);
        assert_eq!(h2_kernel(p, q).unwrap(), 4 * i * j - 2 * i - 2 * j + 1);
    }
}

#[test]
fn three_point_u_tilde() {
    let s = sample(vec![(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
    assert_eq!(spearman_u_tilde(&s).unwrap(), 2.0);
    // one triple: x order 1,2,3 and y order 3,1,2
    let s = sample(vec![(1.0, 3.0), (2.0, 1.0), (3.0, 2.0)]);
    let p = s.pairs();
    let mut h = 0;
    for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        h += i32::from(p[a].0 > p[b].0 && p[a].1 > p[c].1);
    }
    assert_eq!(spearman_u_tilde(&s).unwrap(), h as f64);
}

#[test]
fn four_point_example() {
    let s = sample(vec![(1.0, 2.0), (2.0, 1.0), (3.0, 4.0), (4.0, 3.0)]);
    assert_eq!(concordance_counts(&s).unwrap(), (4, 2));
    assert_eq!(kendall_t(&s).unwrap(), 1.0 / 3.0);
    assert!((spearman_s(&s).unwrap() - 0.6).abs() < 1e-15);
}

#[test]
fn ties_name_the_column() {
    let s = PairedSample::from_pairs(vec![(0.0, 1.0), (0.0, 2.0), (1.0, 3.0)]);
    assert!(matches!(s, Err(Error::Tie { ref column }) if column == "x"));
    let s = PairedSample::from_pairs(vec![(0.0, 1.0), (1.0, 1.0), (2.0, 3.0)]);
    assert!(matches!(s, Err(Error::Tie { ref column }) if column == "y"));
}
