//! Agent populations and money-conserving pairwise exchanges.
//!
//! A market holds `N` agents sharing a fixed stock of money `M`. Each trade
//! picks an unordered pair uniformly at random, lets each side shield a
//! fraction `λ` of its holdings, and splits the remaining pool with a fresh
//! uniform share `ε`. With `λ = 0` everywhere the steady state is the
//! exponential (Gibbs) law with mean `σ = M/N`; a common `λ > 0` pushes the
//! mode away from zero; quenched `λᵢ` drawn from a broad law produces an
//! `m⁻²` tail.
//!
//! Snapshot memory for [`run`] is `O(N · n_snapshots)`. Use [`run_observed`]
//! to stream snapshots into an accumulator instead.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, SimRng, SAVING_STREAM};
use crate::stats::ks_two_sample;

/// Law for quenched per-agent saving propensities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SavingLaw {
    /// Uniform on `[lo, hi)`; draws at or above 1 are rejected and redrawn.
    Uniform { lo: f64, hi: f64 },
}

impl SavingLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SavingLaw::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 1.0 || lo >= hi {
                    return Err(Error::InvalidSavingLaw { lo, hi });
                }
                Ok(())
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            SavingLaw::Uniform { lo, hi } => loop {
                let u: f64 = rng.random();
                let lambda = lo + (hi - lo) * u;
                if lambda < hi && lambda < 1.0 {
                    return lambda;
                }
            },
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            SavingLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }
}

/// How saving propensities are assigned to agents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SavingSpec {
    /// `λ = 0` for everyone.
    None,
    /// One common `λ ∈ [0, 1)`.
    Uniform(f64),
    /// Independent per-agent draws, fixed for the whole run.
    Distributed(SavingLaw),
}

impl SavingSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SavingSpec::None => Ok(()),
            SavingSpec::Uniform(lambda) => check_saving(lambda),
            SavingSpec::Distributed(law) => law.validate(),
        }
    }

    pub fn model(&self) -> Model {
        match self {
            SavingSpec::None => Model::Gibbs,
            SavingSpec::Uniform(_) => Model::Cc,
            SavingSpec::Distributed(_) => Model::Ccm,
        }
    }
}

fn check_saving(lambda: f64) -> Result<()> {
    if (0.0..1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::SavingOutOfRange(lambda))
    }
}

/// Which system a [`SimConfig`] drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Market without saving.
    Gibbs,
    /// Market with one common saving propensity.
    Cc,
    /// Market with quenched, distributed saving propensities.
    Ccm,
    /// Ideal-gas collision reference; `n_agents` counts particles and
    /// `total_money` is the total energy.
    Gas,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Gibbs => "gibbs",
            Model::Cc => "cc",
            Model::Ccm => "ccm",
            Model::Gas => "gas",
        }
    }

    pub fn from_name(name: &str) -> Option<Model> {
        match name {
            "gibbs" => Some(Model::Gibbs),
            "cc" => Some(Model::Cc),
            "ccm" => Some(Model::Ccm),
            "gas" => Some(Model::Gas),
            _ => None,
        }
    }
}

/// Starting allocation of money.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialEndowment {
    /// Every agent starts with `M/N`.
    #[default]
    Equal,
    /// Agent 0 starts with all of `M`.
    Concentrated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub model: Model,
    pub saving: SavingSpec,
    pub n_agents: usize,
    pub total_money: f64,
    /// Number of pairwise trades (or collisions) to execute.
    pub n_exchanges: u64,
    pub seed: u64,
    /// Exchanges between snapshots once burn-in is over.
    pub measure_every: u64,
    /// Exchanges discarded before the first snapshot.
    pub burn_in: u64,
    /// Independent replicas; replica `r` uses seed `seed + r`.
    pub ensemble: usize,
    pub initial: InitialEndowment,
}

impl SimConfig {
    /// Market config with the documented defaults: burn-in of ten sweeps
    /// (capped at `n_exchanges`), one snapshot per sweep, one replica.
    pub fn new(
        saving: SavingSpec,
        n_agents: usize,
        total_money: f64,
        n_exchanges: u64,
        seed: u64,
    ) -> Self {
        let n = n_agents as u64;
        SimConfig {
            model: saving.model(),
            saving,
            n_agents,
            total_money,
            n_exchanges,
            seed,
            measure_every: n.max(1),
            burn_in: (10 * n).min(n_exchanges),
            ensemble: 1,
            initial: InitialEndowment::Equal,
        }
    }

    /// Gas config: `n_particles` sharing `total_energy`.
    pub fn gas(n_particles: usize, total_energy: f64, n_collisions: u64, seed: u64) -> Self {
        SimConfig {
            model: Model::Gas,
            ..SimConfig::new(
                SavingSpec::None,
                n_particles,
                total_energy,
                n_collisions,
                seed,
            )
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 2 {
            return Err(Error::TooFewAgents(self.n_agents));
        }
        if !(self.total_money.is_finite() && self.total_money > 0.0) {
            return Err(Error::NonPositiveTotal(self.total_money));
        }
        self.saving.validate()?;
        let consistent = match self.model {
            Model::Gas => self.saving == SavingSpec::None,
            m => m == self.saving.model(),
        };
        if !consistent {
            return Err(Error::InvalidConfig(format!(
                "model {} does not match the saving specification",
                self.model.name()
            )));
        }
        if self.n_exchanges < self.burn_in {
            return Err(Error::InvalidConfig(format!(
                "burn_in ({}) exceeds n_exchanges ({})",
                self.burn_in, self.n_exchanges
            )));
        }
        if self.measure_every == 0 {
            return Err(Error::InvalidConfig(
                "measure_every must be at least 1".into(),
            ));
        }
        if self.ensemble == 0 {
            return Err(Error::InvalidConfig("ensemble must be at least 1".into()));
        }
        Ok(())
    }

    /// Mean holding per agent, `σ = M/N`.
    pub fn sigma(&self) -> f64 {
        self.total_money / self.n_agents as f64
    }

    /// Run length in sweeps (one sweep is `N` exchanges).
    pub fn sweeps(&self) -> f64 {
        self.n_exchanges as f64 / self.n_agents as f64
    }

    pub fn replica_seed(&self, replica: usize) -> u64 {
        self.seed.wrapping_add(replica as u64)
    }

    /// Number of snapshots a run of this config records.
    pub fn n_snapshots(&self) -> u64 {
        (self.n_exchanges - self.burn_in) / self.measure_every
    }
}

/// The exponential steady state `n(m) = C·exp(−m/σ)` with `C = 1/σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsModel {
    pub sigma: f64,
}

impl GibbsModel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::NonPositiveTotal(sigma));
        }
        Ok(GibbsModel { sigma })
    }

    /// `σ = M/N`.
    pub fn from_totals(total_money: f64, n_agents: usize) -> Result<Self> {
        GibbsModel::new(total_money / n_agents as f64)
    }

    /// Normalization constant `C = 1/σ`.
    pub fn normalization(&self) -> f64 {
        1.0 / self.sigma
    }

    pub fn pdf(&self, m: f64) -> f64 {
        self.normalization() * (-m / self.sigma).exp()
    }

    pub fn cdf(&self, m: f64) -> f64 {
        if m <= 0.0 {
            0.0
        } else {
            -(-m / self.sigma).exp_m1()
        }
    }
}

/// Agents' money holdings and saving propensities.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    money: Vec<f64>,
    saving: Vec<f64>,
    total_money: f64,
}

impl Population {
    /// Builds a population from explicit holdings. `total_money` is taken
    /// as the sum of `money`.
    pub fn from_parts(money: Vec<f64>, saving: Vec<f64>) -> Result<Self> {
        if money.len() < 2 {
            return Err(Error::TooFewAgents(money.len()));
        }
        if saving.len() != money.len() {
            return Err(Error::InvalidConfig(format!(
                "{} saving propensities for {} agents",
                saving.len(),
                money.len()
            )));
        }
        if let Some(&m) = money.iter().find(|m| !(**m >= 0.0 && m.is_finite())) {
            return Err(Error::Negative {
                what: "money",
                value: m,
            });
        }
        for &lambda in &saving {
            check_saving(lambda)?;
        }
        let total_money: f64 = money.iter().sum();
        if total_money <= 0.0 {
            return Err(Error::NonPositiveTotal(total_money));
        }
        Ok(Population {
            money,
            saving,
            total_money,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.money.len()
    }

    /// Total money as fixed at initialization.
    pub fn total_money(&self) -> f64 {
        self.total_money
    }

    pub fn money(&self) -> &[f64] {
        &self.money
    }

    pub fn saving(&self) -> &[f64] {
        &self.saving
    }

    /// Current sum of holdings; equals [`Population::total_money`] up to
    /// pair-sum rounding.
    pub fn current_sum(&self) -> f64 {
        self.money.iter().sum()
    }

    /// Trades between agents `i` and `j` with share `eps` going to `i`'s
    /// side of the pooled money. Agent roles are not symmetrized here.
    #[inline]
    pub fn exchange_agents(&mut self, i: usize, j: usize, eps: f64) {
        debug_assert_ne!(i, j);
        let (mi, mj) = exchange_pair(
            self.money[i],
            self.money[j],
            self.saving[i],
            self.saving[j],
            eps,
        );
        self.money[i] = mi;
        self.money[j] = mj;
    }

    /// Relabels agents: agent `k` moves to position `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Population {
        assert_eq!(perm.len(), self.n_agents());
        let mut money = vec![0.0; perm.len()];
        let mut saving = vec![0.0; perm.len()];
        for (k, &p) in perm.iter().enumerate() {
            money[p] = self.money[k];
            saving[p] = self.saving[k];
        }
        Population {
            money,
            saving,
            total_money: self.total_money,
        }
    }
}

/// Builds a population of `n_agents` with equal endowment `total_money / n_agents`.
///
/// Saving propensities are drawn from a stream of `seed` reserved for that
/// purpose, so they do not shift when trading consumes randomness.
pub fn init_population(
    n_agents: usize,
    total_money: f64,
    spec: SavingSpec,
    seed: u64,
) -> Result<Population> {
    init_population_with(n_agents, total_money, spec, seed, InitialEndowment::Equal)
}

pub fn init_population_with(
    n_agents: usize,
    total_money: f64,
    spec: SavingSpec,
    seed: u64,
    initial: InitialEndowment,
) -> Result<Population> {
    if n_agents < 2 {
        return Err(Error::TooFewAgents(n_agents));
    }
    if !(total_money.is_finite() && total_money > 0.0) {
        return Err(Error::NonPositiveTotal(total_money));
    }
    spec.validate()?;

    let money = match initial {
        InitialEndowment::Equal => vec![total_money / n_agents as f64; n_agents],
        InitialEndowment::Concentrated => {
            let mut m = vec![0.0; n_agents];
            m[0] = total_money;
            m
        }
    };
    let saving = match spec {
        SavingSpec::None => vec![0.0; n_agents],
        SavingSpec::Uniform(lambda) => vec![lambda; n_agents],
        SavingSpec::Distributed(law) => {
            let mut rng = stream_rng(seed, SAVING_STREAM);
            (0..n_agents).map(|_| law.sample(&mut rng)).collect()
        }
    };
    Ok(Population {
        money,
        saving,
        total_money,
    })
}

/// One money-conserving trade.
///
/// Agent `i` ends with `λᵢ·mᵢ + ε·[(1−λᵢ)·mᵢ + (1−λⱼ)·mⱼ]` and agent `j`
/// with the rest of the pair total. The two transfers
/// `a = (1−ε)(1−λᵢ)mᵢ` and `b = ε(1−λⱼ)mⱼ` are formed once and their
/// difference moves from one side to the other. The larger share is
/// computed as `m ± (b − a)` and the smaller one as `total − larger`,
/// which is exact in floating point because the larger share is at least
/// half the total. The pair sum after the trade is
/// therefore exactly `fl(mᵢ + mⱼ)`.
#[inline]
pub fn exchange_pair(m_i: f64, m_j: f64, lambda_i: f64, lambda_j: f64, eps: f64) -> (f64, f64) {
    debug_assert!(m_i >= 0.0 && m_j >= 0.0, "negative money ({m_i}, {m_j})");
    debug_assert!((0.0..1.0).contains(&lambda_i) && (0.0..1.0).contains(&lambda_j));
    debug_assert!((0.0..=1.0).contains(&eps), "eps = {eps}");

    let total = m_i + m_j;
    let give_i = (1.0 - eps) * (1.0 - lambda_i) * m_i;
    let give_j = eps * (1.0 - lambda_j) * m_j;
    let net = give_j - give_i;
    let new_i = m_i + net;
    let new_j = m_j - net;
    if new_i >= new_j {
        let new_i = new_i.min(total);
        (new_i, total - new_i)
    } else {
        let new_j = new_j.min(total);
        (total - new_j, new_j)
    }
}

/// A system of non-negative quantities exchanged pairwise at random.
pub trait PairwiseSystem {
    fn values(&self) -> &[f64];
    fn step(&mut self, rng: &mut SimRng);
}

/// Draws an unordered pair of distinct indices uniformly from `0..n`.
#[inline]
pub(crate) fn random_pair(rng: &mut SimRng, n: usize) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl PairwiseSystem for Population {
    fn values(&self) -> &[f64] {
        &self.money
    }

    #[inline]
    fn step(&mut self, rng: &mut SimRng) {
        step(self, rng)
    }
}

/// One random trade: a uniformly chosen pair, `ε ~ U[0,1)`.
#[inline]
pub fn step(pop: &mut Population, rng: &mut SimRng) {
    let (i, j) = random_pair(rng, pop.n_agents());
    let eps: f64 = rng.random();
    pop.exchange_agents(i, j, eps);
}

/// Money vectors recorded during a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SnapshotSeries {
    /// Exchange count (1-based) at which each snapshot was taken.
    pub at_exchange: Vec<u64>,
    pub snapshots: Vec<Vec<f64>>,
}

impl SnapshotSeries {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn push(&mut self, at_exchange: u64, values: &[f64]) {
        self.at_exchange.push(at_exchange);
        self.snapshots.push(values.to_vec());
    }

    /// All snapshots concatenated in recording order.
    pub fn pooled(&self) -> Vec<f64> {
        self.snapshots.iter().flatten().copied().collect()
    }
}

/// Executes `config.n_exchanges` steps, calling `observer(t, values)` after
/// exchange `t` whenever `t > burn_in` and `t − burn_in` is a multiple of
/// `measure_every`.
pub fn run_observed<S, F>(system: &mut S, config: &SimConfig, rng: &mut SimRng, mut observer: F)
where
    S: PairwiseSystem + ?Sized,
    F: FnMut(u64, &[f64]),
{
    let every = config.measure_every.max(1);
    let burn_in = config.burn_in.min(config.n_exchanges);
    for _ in 0..burn_in {
        system.step(rng);
    }
    let mut t = burn_in;
    while t < config.n_exchanges {
        let chunk = every.min(config.n_exchanges - t);
        for _ in 0..chunk {
            system.step(rng);
        }
        t += chunk;
        if chunk == every {
            observer(t, system.values());
        }
    }
}

/// Like [`run_observed`], but stores every snapshot.
pub fn run<S>(system: &mut S, config: &SimConfig, rng: &mut SimRng) -> SnapshotSeries
where
    S: PairwiseSystem + ?Sized,
{
    let mut series = SnapshotSeries::default();
    run_observed(system, config, rng, |t, values| series.push(t, values));
    series
}

/// Two-window stationarity test over the trailing `2·window` snapshots:
/// true iff the two-sample KS distance between the pooled older and newer
/// halves is below `tol`.
pub fn detect_steady_state(series: &SnapshotSeries, window: usize, tol: f64) -> Result<bool> {
    let need = 2 * window.max(1);
    if series.len() < need {
        return Err(Error::SeriesTooShort {
            have: series.len(),
            need,
        });
    }
    let tail = &series.snapshots[series.len() - need..];
    let (older, newer) = tail.split_at(window.max(1));
    let older: Vec<f64> = older.iter().flatten().copied().collect();
    let newer: Vec<f64> = newer.iter().flatten().copied().collect();
    Ok(ks_two_sample(&older, &newer)? < tol)
}
