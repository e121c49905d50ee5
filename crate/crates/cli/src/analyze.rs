//! Statistics on external samples.

use serde::{Deserialize, Serialize};

use kinex_core::stats::tail_plateau;
use kinex_core::{
    fit_gamma_moments, gini, hill_tail, ks_distance, mean_variance, shannon_entropy, GibbsModel,
    Histogram, TailFit,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n_samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub gini: f64,
    /// Entropy (nats) in the 200-bin `[0, 10·mean]` binning.
    pub entropy: f64,
    pub gamma_shape: Option<f64>,
    pub gamma_scale: Option<f64>,
    pub tail: Option<TailFit>,
    pub no_plateau: Option<bool>,
    /// KS distance to an exponential with the sample mean.
    pub ks_vs_exponential: f64,
}

pub fn analyze(samples: &[f64], tail_fraction: f64) -> Result<SampleSummary, CliError> {
    let (mean, variance) = mean_variance(samples)?;
    let g = gini(samples)?;
    let mut binned = Histogram::entropy_binning(mean)?;
    binned.add_all(samples);
    let gamma = fit_gamma_moments(samples).ok();
    let exp = GibbsModel::new(mean)?;
    Ok(SampleSummary {
        n_samples: samples.len(),
        mean,
        variance,
        gini: g,
        entropy: shannon_entropy(&binned),
        gamma_shape: gamma.map(|f| f.shape),
        gamma_scale: gamma.map(|f| f.scale),
        tail: hill_tail(samples, tail_fraction).ok(),
        no_plateau: tail_plateau(samples).ok().map(|p| p.no_plateau),
        ks_vs_exponential: ks_distance(samples, |x| exp.cdf(x))?,
    })
}
