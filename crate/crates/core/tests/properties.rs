use proptest::prelude::*;

use kinex_core::{
    beta_3_2_cdf, beta_3_2_quantile, collide, exchange_pair, gini, histogram, seeded_rng, BinMode,
    Population,
};
use rand::Rng;

fn money() -> impl Strategy<Value = f64> {
    prop_oneof![0.0..1e-6f64, 0.0..10.0f64, 0.0..1e6f64, Just(0.0)]
}

fn saving() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 0.0..1.0f64, 0.99..1.0f64]
}

proptest! {
    #[test]
    fn exchange_conserves_and_stays_non_negative(
        mi in money(), mj in money(), li in saving(), lj in saving(), eps in 0.0..=1.0f64,
    ) {
        let (a, b) = exchange_pair(mi, mj, li, lj, eps);
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert_eq!(a + b, mi + mj);
        // Each side keeps at least its saved fraction.
        prop_assert!(a >= li * mi * (1.0 - 1e-12) - 1e-300);
        prop_assert!(b >= lj * mj * (1.0 - 1e-12) - 1e-300);
    }

    #[test]
    fn fixed_point_is_exact(m in money(), lambda in saving()) {
        prop_assert_eq!(exchange_pair(m, m, lambda, lambda, 0.5), (m, m));
    }

    #[test]
    fn gini_bounds(xs in prop::collection::vec(0.0..100.0f64, 1..200)) {
        prop_assume!(xs.iter().any(|&x| x > 0.0));
        let g = gini(&xs).unwrap();
        prop_assert!((0.0..1.0).contains(&g));
    }

    #[test]
    fn histogram_counts_every_sample(
        xs in prop::collection::vec(0.0..50.0f64, 1..300), bins in 2usize..64,
    ) {
        let h = histogram(&xs, bins, BinMode::Linear).unwrap();
        prop_assert_eq!(h.counts.iter().sum::<u64>(), h.total);
        prop_assert_eq!(h.total as usize, xs.len());
        prop_assert!((h.integral() - 1.0).abs() < 1e-12);

        let lh = histogram(&xs, bins, BinMode::Logarithmic);
        if let Ok(lh) = lh {
            prop_assert_eq!(lh.total + lh.zero_count, xs.len() as u64);
            prop_assert_eq!(lh.overflow + lh.underflow, 0);
        }
    }

    #[test]
    fn beta_quantile_round_trip(u in 0.0..=1.0f64) {
        let x = beta_3_2_quantile(u).unwrap();
        prop_assert!((0.0..=1.0).contains(&x));
        prop_assert!((beta_3_2_cdf(x) - u).abs() < 1e-9);
        let y = beta_3_2_quantile(1.0 - u).unwrap();
        prop_assert!((x + y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collide_conserves(ei in money(), ej in money(), u in 0.0..=1.0f64) {
        let (a, b) = collide(ei, ej, u);
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert_eq!(a + b, ei + ej);
    }

    #[test]
    fn relabeling_commutes_with_trades(
        n in 3usize..20, seed in any::<u64>(), uniform in any::<bool>(),
    ) {
        let mut rng = seeded_rng(seed);
        let lambda = if uniform { rng.random::<f64>() * 0.9 } else { 0.0 };
        let money: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 5.0).collect();
        let pop = Population::from_parts(money, vec![lambda; n]).unwrap();

        let mut perm: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            perm.swap(k, rng.random_range(0..=k));
        }
        let mut original = pop.clone();
        let mut relabeled = pop.permuted(&perm);
        for _ in 0..200 {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            let eps: f64 = rng.random();
            original.exchange_agents(i, j, eps);
            relabeled.exchange_agents(perm[i], perm[j], eps);
        }
        prop_assert_eq!(original.permuted(&perm), relabeled);
    }
}

/// λ = 0 reduces the kernel to the pooled split `ε·(mᵢ + mⱼ)`, checked on a
/// million random inputs.
#[test]
fn zero_saving_is_pooled_split() {
    let mut rng = seeded_rng(2024);
    let mut worst = 0.0f64;
    for _ in 0..1_000_000 {
        let mi = rng.random::<f64>() * 100.0;
        let mj = rng.random::<f64>() * 100.0;
        let eps: f64 = rng.random();
        let (a, b) = exchange_pair(mi, mj, 0.0, 0.0, eps);
        let total = mi + mj;
        let expected = eps * total;
        worst = worst.max((a - expected).abs() / total);
        assert_eq!(a + b, total);
    }
    assert!(worst < 1e-12, "worst relative deviation {worst}");
}
