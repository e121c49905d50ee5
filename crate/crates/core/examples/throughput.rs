use std::time::Instant;

use kinex_core::{
    init_population, run_observed, seeded_rng, GasEnsemble, SavingLaw, SavingSpec, SimConfig,
};

fn main() {
    for (name, spec, n) in [
        ("gibbs N=1e4", SavingSpec::None, 10_000usize),
        ("cc N=1e3", SavingSpec::Uniform(0.5), 1000),
        (
            "ccm N=1e3",
            SavingSpec::Distributed(SavingLaw::Uniform { lo: 0.0, hi: 1.0 }),
            1000,
        ),
    ] {
        let cfg = SimConfig::new(spec, n, n as f64, 10_000_000, 1);
        let mut pop = init_population(n, n as f64, spec, 1).unwrap();
        let t = Instant::now();
        run_observed(&mut pop, &cfg, &mut seeded_rng(1), |_, _| {});
        println!(
            "{name}: {:.1} ns/exchange",
            t.elapsed().as_nanos() as f64 / 1e7
        );
    }
    let cfg = SimConfig::gas(10_000, 15_000.0, 10_000_000, 1);
    let mut gas = GasEnsemble::new(10_000, 15_000.0).unwrap();
    let t = Instant::now();
    run_observed(&mut gas, &cfg, &mut seeded_rng(1), |_, _| {});
    println!(
        "gas: {:.1} ns/collision",
        t.elapsed().as_nanos() as f64 / 1e7
    );
}
