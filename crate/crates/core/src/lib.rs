//! Kinetic exchange models of a closed trading market.
//!
//! Three pieces live here:
//!
//! * [`exchange`]: agent populations and money-conserving pairwise trades,
//!   with optional per-agent saving propensity.
//! * [`gas`]: the ideal-gas reference channel, analytic Maxwell-Boltzmann and
//!   Gibbs densities plus an energy-shell collision simulator.
//! * [`stats`]: histograms, entropy, Gini, Gamma moment fits, Hill tail
//!   estimates and Kolmogorov-Smirnov distances.
//!
//! All randomness flows through [`rng::SimRng`], so a seed fully determines a run.

pub mod error;
pub mod exchange;
pub mod gas;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use exchange::{
    detect_steady_state, exchange_pair, init_population, init_population_with, run, run_observed,
    step, GibbsModel, InitialEndowment, Model, PairwiseSystem, Population, SavingLaw, SavingSpec,
    SimConfig, SnapshotSeries,
};
pub use gas::{beta_3_2_cdf, beta_3_2_quantile, collide, gibbs_pdf, mb_pdf, GasEnsemble, MBModel};
pub use rng::{seeded_rng, stream_rng, SimRng, RNG_ALGORITHM, SAVING_STREAM, TRADING_STREAM};
pub use stats::{
    ccdf_points, ccdf_slope, fit_gamma_moments, gini, hill_tail, histogram, ks_distance,
    ks_two_sample, mean_variance, shannon_entropy, tail_plateau, BinMode, GammaFit, Histogram,
    PlateauCheck, TailFit,
};
