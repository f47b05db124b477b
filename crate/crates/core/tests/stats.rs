use cochange_core::stats::{
    cliffs_delta, compare_algorithms, holm_adjust, wilcoxon_normal, wilcoxon_signed_rank, Magnitude, Metric,
    MetricSeries, WilcoxonMethod, PAIRS,
};
use cochange_core::Algorithm;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-sided exact p-value by listing all 2^n sign assignments. Ranks are
/// kept doubled (2 * #smaller + #equal + 1) so sums stay integral.
fn enumeration_oracle(x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return 1.0;
    }
    let rank2: Vec<u64> = d
        .iter()
        .map(|v| {
            let less = d.iter().filter(|w| w.abs() < v.abs()).count() as u64;
            let equal = d.iter().filter(|w| w.abs() == v.abs()).count() as u64;
            2 * less + equal + 1
        })
        .collect();
    let observed: u64 = d.iter().zip(&rank2).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let (mut lower, mut upper) = (0u64, 0u64);
    for mask in 0u64..(1 << n) {
        let w: u64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| rank2[i]).sum();
        if w <= observed {
            lower += 1;
        }
        if w >= observed {
            upper += 1;
        }
    }
    (2.0 * lower.min(upper) as f64 / (1u64 << n) as f64).min(1.0)
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(1..=10);
    // coarse values produce zeros and tied magnitudes
    let x = (0..n).map(|_| rng.gen_range(0..8) as f64 * 0.125).collect();
    let y = (0..n).map(|_| rng.gen_range(0..8) as f64 * 0.125).collect();
    (x, y)
}

#[test]
fn all_negative_five() {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let y = [2.0, 3.0, 4.0, 5.0, 6.0];
    let r = wilcoxon_signed_rank(&x, &y).unwrap();
    assert_eq!(r.p_value, 0.0625);
    assert_eq!((r.n, r.w_plus, r.method), (5, 0.0, WilcoxonMethod::Exact));
}

#[test]
fn exact_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (x, y) = random_pair(&mut rng);
        assert_eq!(wilcoxon_signed_rank(&x, &y).unwrap().p_value, enumeration_oracle(&x, &y), "{x:?} {y:?}");
    }
}

#[test]
fn large_samples_use_the_normal_approximation() {
    let x: Vec<f64> = (1..=30).map(f64::from).collect();
    let y = vec![0.0; 30];
    let r = wilcoxon_signed_rank(&x, &y).unwrap();
    assert_eq!(r.method, WilcoxonMethod::Normal);
    // z = (465 - 232.5 - 0.5) / sqrt(2363.75) = 4.7718...
    assert!((r.p_value - 1.826e-6).abs() < 1e-8, "{}", r.p_value);
}

#[test]
fn normal_tracks_exact_for_moderate_n() {
    let x = [0.9, 0.8, 0.75, 0.6, 0.55, 0.7, 0.4, 0.65, 0.3, 0.85, 0.5, 0.45];
    let y = [0.5, 0.6, 0.8, 0.35, 0.3, 0.45, 0.5, 0.2, 0.35, 0.4, 0.52, 0.1];
    let exact = wilcoxon_signed_rank(&x, &y).unwrap();
    let normal = wilcoxon_normal(&x, &y).unwrap();
    assert!((exact.p_value - normal.p_value).abs() < 0.02, "{} vs {}", exact.p_value, normal.p_value);
}

#[test]
fn holm_examples() {
    assert_eq!(holm_adjust(&[0.01, 0.02, 0.2]), [0.03, 0.04, 0.2]);
    assert_eq!(holm_adjust(&[0.2, 0.01, 0.02]), [0.2, 0.03, 0.04]);
    assert_eq!(holm_adjust(&[0.04, 0.03]), [0.06, 0.06]);
    assert_eq!(holm_adjust(&[0.5, 0.9]), [1.0, 1.0]);
    assert_eq!(holm_adjust(&[0.5]), [0.5]);
    assert_eq!(holm_adjust(&[0.04, 0.04, 0.04]), [0.12, 0.12, 0.12]);
    assert!(holm_adjust(&[]).is_empty());
}

#[test]
fn magnitude_boundaries() {
    let cases = [
        (0.0, Magnitude::Negligible),
        (0.146, Magnitude::Negligible),
        (0.147, Magnitude::Small),
        (0.329, Magnitude::Small),
        (0.33, Magnitude::Medium),
        (0.473, Magnitude::Medium),
        (0.474, Magnitude::Large),
        (1.0, Magnitude::Large),
        (-0.147, Magnitude::Small),
        (-0.5, Magnitude::Large),
    ];
    for (d, m) in cases {
        assert_eq!(Magnitude::of(d), m, "{d}");
    }
}

#[test]
fn cliffs_delta_by_hand() {
    let y = [0.125, 0.25, 0.375, 0.5, 0.625];
    let x: Vec<f64> = y.iter().map(|v| v + 0.125).collect();
    // 15 greater, 6 smaller, 4 equal of 25 pairs
    let e = cliffs_delta(&x, &y).unwrap();
    assert_eq!((e.d, e.magnitude), (9.0 / 25.0, Magnitude::Medium));
    assert_eq!(cliffs_delta(&y, &x).unwrap().d, -9.0 / 25.0);

    let dominant = cliffs_delta(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
    assert_eq!((dominant.d, dominant.magnitude), (1.0, Magnitude::Large));
    let split = cliffs_delta(&[2.0], &[1.0, 3.0]).unwrap();
    assert_eq!((split.d, split.magnitude), (0.0, Magnitude::Negligible));
}

fn series(values: &[f64]) -> MetricSeries {
    let mut s = MetricSeries::default();
    for &v in values {
        s.push(v, v / 2.0, v / 4.0);
    }
    s
}

#[test]
fn compare_fixture() {
    let base = [0.125, 0.25, 0.375, 0.5, 0.625];
    let higher: Vec<f64> = base.iter().map(|v| v + 0.125).collect();
    let input = vec![
        (Algorithm::Apriori, series(&base)),
        (Algorithm::FpGrowth, series(&base)),
        (Algorithm::Eclat, series(&base)),
        (Algorithm::Relim, series(&higher)),
    ];
    let report = compare_algorithms(&input).unwrap();
    assert_eq!(report.rows.len(), 18);
    for (i, row) in report.rows.iter().enumerate() {
        assert_eq!(row.metric, Metric::ALL[i / 6]);
        assert_eq!(row.pair, PAIRS[i % 6]);
        if row.pair.0 == Algorithm::Relim {
            // raw 2/32 each; Holm ranks three equal p-values at 6x, 5x, 4x
            assert_eq!((row.n, row.p_raw, row.p_holm), (5, 0.0625, 0.375));
            assert_eq!(row.effect.magnitude, Magnitude::Medium);
            assert!(row.effect.d > 0.0);
            assert!(!row.significant);
        } else {
            assert_eq!((row.n, row.p_raw, row.p_holm, row.effect.d), (0, 1.0, 1.0, 0.0));
        }
    }
}

#[test]
fn compare_identical_inputs() {
    let s = series(&[0.2, 0.4, 0.1]);
    let input: Vec<_> = Algorithm::ALL.iter().map(|&a| (a, s.clone())).collect();
    let report = compare_algorithms(&input).unwrap();
    assert_eq!(report.rows.len(), 18);
    assert!(report.rows.iter().all(|r| r.p_holm == 1.0 && r.p_raw == 1.0 && r.effect.d == 0.0));
}

#[test]
fn compare_requires_all_algorithms_and_aligned_samples() {
    let s = series(&[0.2, 0.4]);
    let three: Vec<_> = Algorithm::ALL[..3].iter().map(|&a| (a, s.clone())).collect();
    assert!(compare_algorithms(&three).is_err());
    let mut four: Vec<_> = Algorithm::ALL.iter().map(|&a| (a, s.clone())).collect();
    four[2].1.push(0.1, 0.1, 0.1);
    assert!(compare_algorithms(&four).is_err());
}

proptest! {
    #[test]
    fn wilcoxon_is_symmetric_and_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = random_pair(&mut rng);
        let a = wilcoxon_signed_rank(&x, &y).unwrap();
        let b = wilcoxon_signed_rank(&y, &x).unwrap();
        prop_assert_eq!(a.p_value, b.p_value);
        prop_assert!(a.p_value > 0.0 && a.p_value <= 1.0);
    }

    #[test]
    fn holm_is_monotone_and_dominates(p in prop::collection::vec(0.0f64..=1.0, 0..12)) {
        let adj = holm_adjust(&p);
        prop_assert_eq!(adj.len(), p.len());
        for (raw, a) in p.iter().zip(&adj) {
            prop_assert!(a >= raw && *a <= 1.0);
        }
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by(|&i, &j| p[i].total_cmp(&p[j]));
        for w in order.windows(2) {
            prop_assert!(adj[w[0]] <= adj[w[1]]);
        }
    }

    #[test]
    fn cliffs_delta_is_antisymmetric(
        x in prop::collection::vec(0u8..10, 1..15),
        y in prop::collection::vec(0u8..10, 1..15),
    ) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let y: Vec<f64> = y.into_iter().map(f64::from).collect();
        let a = cliffs_delta(&x, &y).unwrap().d;
        prop_assert!((-1.0..=1.0).contains(&a));
        prop_assert_eq!(a, -cliffs_delta(&y, &x).unwrap().d);
    }
}
