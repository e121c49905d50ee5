mod common;

use common::exp_samples;
use kinex_core::{
    detect_steady_state, init_population, init_population_with, ks_distance, ks_two_sample, run,
    run_observed, seeded_rng, GasEnsemble, GibbsModel, InitialEndowment, SavingLaw, SavingSpec,
    SimConfig, SnapshotSeries,
};

fn config(spec: SavingSpec, n: usize, m: f64, exchanges: u64, seed: u64) -> SimConfig {
    SimConfig::new(spec, n, m, exchanges, seed)
}

#[test]
fn identical_seed_gives_identical_series() {
    let spec = SavingSpec::Distributed(SavingLaw::Uniform { lo: 0.0, hi: 1.0 });
    let cfg = config(spec, 200, 200.0, 200_000, 17);
    let go = || {
        let mut pop = init_population(200, 200.0, spec, cfg.seed).unwrap();
        let series = run(&mut pop, &cfg, &mut seeded_rng(cfg.seed));
        (series, pop)
    };
    let (a, pa) = go();
    let (b, pb) = go();
    assert_eq!(a, b);
    assert_eq!(pa, pb);
    assert!(a.len() > 100);
}

#[test]
fn mean_money_is_pinned_by_conservation() {
    let spec = SavingSpec::Distributed(SavingLaw::Uniform { lo: 0.0, hi: 1.0 });
    let mut pop = init_population(500, 1234.5, spec, 3).unwrap();
    let cfg = config(spec, 500, 1234.5, 2_000_000, 3);
    let mut worst = 0.0f64;
    run_observed(&mut pop, &cfg, &mut seeded_rng(3), |_, money| {
        assert!(money.iter().all(|&m| m >= 0.0));
        let sum: f64 = money.iter().sum();
        worst = worst.max((sum - 1234.5).abs() / 1234.5);
    });
    assert!(worst < 1e-12, "relative drift {worst}");
}

#[test]
fn zero_saving_market_relaxes_to_exponential() {
    let (n, m) = (1000, 5000.0);
    let cfg = config(SavingSpec::None, n, m, 3_000_000, 21);
    let mut pop = init_population(n, m, SavingSpec::None, 21).unwrap();
    let series = run(&mut pop, &cfg, &mut seeded_rng(21));
    let gibbs = GibbsModel::from_totals(m, n).unwrap();
    let pooled = series.pooled();
    let d = ks_distance(&pooled, |x| gibbs.cdf(x)).unwrap();
    assert!(d < 0.02, "KS {d} over {} samples", pooled.len());
}

#[test]
fn saving_empties_the_lowest_bin() {
    let (n, m) = (1000, 1000.0);
    let low_fraction = |spec: SavingSpec| {
        let cfg = config(spec, n, m, 2_000_000, 5);
        let mut pop = init_population(n, m, spec, 5).unwrap();
        let mut low = 0usize;
        let mut seen = 0usize;
        run_observed(&mut pop, &cfg, &mut seeded_rng(5), |_, money| {
            low += money.iter().filter(|&&x| x < 0.05).count();
            seen += money.len();
        });
        low as f64 / seen as f64
    };
    let without = low_fraction(SavingSpec::None);
    let with = low_fraction(SavingSpec::Uniform(0.5));
    assert!(
        (without - 0.0488).abs() < 0.01,
        "λ=0 low fraction {without}"
    );
    assert!(with < without / 5.0, "{with} vs {without}");
}

#[test]
fn steady_state_independent_of_initial_endowment() {
    let (n, m) = (1000, 1000.0);
    let pooled = |initial| {
        let mut cfg = config(SavingSpec::Uniform(0.3), n, m, 3_000_000, 8);
        cfg.burn_in = 1_000_000;
        cfg.initial = initial;
        let mut pop = init_population_with(n, m, SavingSpec::Uniform(0.3), 8, initial).unwrap();
        run(
            &mut pop,
            &cfg,
            &mut seeded_rng(if initial == InitialEndowment::Equal {
                8
            } else {
                9
            }),
        )
        .pooled()
    };
    let equal = pooled(InitialEndowment::Equal);
    let concentrated = pooled(InitialEndowment::Concentrated);
    let d = ks_two_sample(&equal, &concentrated).unwrap();
    assert!(d < 0.02, "KS between starts {d}");
}

#[test]
fn steady_state_detector_separates_scales() {
    let series = SnapshotSeries {
        at_exchange: vec![1, 2],
        snapshots: vec![exp_samples(10_000, 1.0, 40), exp_samples(10_000, 2.0, 41)],
    };
    assert!(!detect_steady_state(&series, 1, 0.05).unwrap());
    let d = ks_two_sample(&series.snapshots[0], &series.snapshots[1]).unwrap();
    assert!((d - 0.25).abs() < 0.02, "{d}");
}

#[test]
fn steady_state_detector_on_equilibrated_run() {
    let n = 10_000;
    let mut cfg = config(SavingSpec::None, n, n as f64, 2_000_000, 12);
    cfg.burn_in = 1_000_000;
    cfg.measure_every = n as u64;
    let mut pop = init_population(n, n as f64, SavingSpec::None, 12).unwrap();
    let series = run(&mut pop, &cfg, &mut seeded_rng(12));
    assert_eq!(series.len(), 100);
    assert!(detect_steady_state(&series, 5, 0.02).unwrap());
}

#[test]
fn steady_state_detector_flags_transient() {
    let n = 1000;
    let mut cfg = config(SavingSpec::Uniform(0.9), n, n as f64, 20_000, 1);
    cfg.burn_in = 0;
    cfg.measure_every = 500;
    let mut pop = init_population(n, n as f64, SavingSpec::Uniform(0.9), 1).unwrap();
    let series = run(&mut pop, &cfg, &mut seeded_rng(1));
    assert!(!detect_steady_state(&series, 20, 0.02).unwrap());
}

#[test]
fn gas_relaxes_to_maxwell_boltzmann() {
    let mut gas = GasEnsemble::new(10_000, 15_000.0).unwrap();
    let cfg = SimConfig::gas(10_000, 15_000.0, 10_000_000, 77);
    let series = run(&mut gas, &cfg, &mut seeded_rng(77));
    let mb = gas.mb_model();
    assert_eq!(mb.delta, 1.0);
    let d = ks_distance(gas.energy(), |e| mb.cdf(e)).unwrap();
    assert!(d < 0.02, "KS {d}");
    let sum: f64 = gas.energy().iter().sum();
    assert!((sum - 15_000.0).abs() / 15_000.0 < 1e-12);
    assert!(!series.is_empty());
    // Contrast: the gas is far from the exponential law with the same mean.
    let gibbs = GibbsModel::new(1.5).unwrap();
    assert!(ks_distance(gas.energy(), |e| gibbs.cdf(e)).unwrap() > 0.05);
}
