//! Measurement of money and energy samples.
//!
//! Histograms come in linear and logarithmic flavors. Samples that cannot be
//! placed (zeros under log binning, values outside explicit edges) are
//! counted in side channels rather than dropped, and `total` counts only the
//! binned samples so densities integrate to one over the binned range.
//!
//! Tail exponents follow two conventions: `exponent_ccdf` is the index of
//! `P(X > x) ~ x^(−a)` as estimated by Hill, and `exponent_pdf = a + 1` is
//! the exponent of the density `n(m) ~ m^(−α)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of bins used for entropy comparisons.
pub const ENTROPY_BINS: usize = 200;
/// Entropy histograms span `[0, ENTROPY_RANGE · mean]`.
pub const ENTROPY_RANGE: f64 = 10.0;
/// Top fractions probed by [`tail_plateau`].
pub const PLATEAU_FRACTIONS: [f64; 3] = [0.10, 0.05, 0.02];
/// Two Hill estimates disagree when they differ by more than this many
/// combined standard errors.
pub const PLATEAU_SIGMAS: f64 = 3.0;
/// Smallest number of order statistics a Hill fit accepts.
pub const MIN_TAIL_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinMode {
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples placed in bins; equals `counts.iter().sum()`.
    pub total: u64,
    pub mode: BinMode,
    /// Non-positive samples seen under logarithmic binning.
    pub zero_count: u64,
    /// Samples below the first edge (linear binning only).
    pub underflow: u64,
    /// Samples above the last edge.
    pub overflow: u64,
}

impl Histogram {
    /// Empty histogram over explicit edges.
    pub fn with_edges(edges: Vec<f64>, mode: BinMode) -> Result<Self> {
        if edges.len() < 3 {
            return Err(Error::TooFewBins(edges.len().saturating_sub(1)));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadEdges);
        }
        if mode == BinMode::Logarithmic && edges[0] <= 0.0 {
            return Err(Error::BadEdges);
        }
        let n_bins = edges.len() - 1;
        Ok(Histogram {
            edges,
            counts: vec![0; n_bins],
            total: 0,
            mode,
            zero_count: 0,
            underflow: 0,
            overflow: 0,
        })
    }

    /// `n_bins` equal-width bins over `[lo, hi]`.
    pub fn linear_range(lo: f64, hi: f64, n_bins: usize) -> Result<Self> {
        if n_bins < 2 {
            return Err(Error::TooFewBins(n_bins));
        }
        let width = (hi - lo) / n_bins as f64;
        let mut edges: Vec<f64> = (0..=n_bins).map(|k| lo + width * k as f64).collect();
        edges[n_bins] = hi;
        Histogram::with_edges(edges, BinMode::Linear)
    }

    /// `n_bins` bins of equal log-width over `[lo, hi]`, `lo > 0`.
    pub fn log_range(lo: f64, hi: f64, n_bins: usize) -> Result<Self> {
        if n_bins < 2 {
            return Err(Error::TooFewBins(n_bins));
        }
        if lo.is_nan() || lo <= 0.0 {
            return Err(Error::BadEdges);
        }
        let ratio = (hi / lo).ln() / n_bins as f64;
        let mut edges: Vec<f64> = (0..=n_bins)
            .map(|k| lo * (ratio * k as f64).exp())
            .collect();
        edges[0] = lo;
        edges[n_bins] = hi;
        Histogram::with_edges(edges, BinMode::Logarithmic)
    }

    /// The binning used for all entropy comparisons: [`ENTROPY_BINS`]
    /// linear bins over `[0, ENTROPY_RANGE · mean]`.
    pub fn entropy_binning(mean: f64) -> Result<Self> {
        Histogram::linear_range(0.0, ENTROPY_RANGE * mean, ENTROPY_BINS)
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, x: f64) {
        if self.mode == BinMode::Logarithmic && x <= 0.0 {
            self.zero_count += 1;
            return;
        }
        let last = *self.edges.last().expect("edges");
        if x < self.edges[0] {
            self.underflow += 1;
            return;
        }
        if x > last || x.is_nan() {
            self.overflow += 1;
            return;
        }
        let k = self.locate(x);
        self.counts[k] += 1;
        self.total += 1;
    }

    // Bins are [e_k, e_{k+1}); the last bin also holds its right edge.
    // Start from the index implied by equal (log-)widths and walk to the
    // exact bin, so explicit irregular edges stay correct.
    fn locate(&self, x: f64) -> usize {
        let n = self.counts.len();
        let first = self.edges[0];
        let last = self.edges[n];
        let frac = match self.mode {
            BinMode::Linear => (x - first) / (last - first),
            BinMode::Logarithmic => (x / first).ln() / (last / first).ln(),
        };
        let mut k = ((frac * n as f64) as usize).min(n - 1);
        while k > 0 && self.edges[k] > x {
            k -= 1;
        }
        while k + 1 < n && self.edges[k + 1] <= x {
            k += 1;
        }
        k
    }

    pub fn add_all(&mut self, samples: &[f64]) {
        for &x in samples {
            self.add(x);
        }
    }

    /// Adds another histogram's counts; edges and mode must match.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges || self.mode != other.mode {
            return Err(Error::BadEdges);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self.zero_count += other.zero_count;
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        Ok(())
    }

    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// Arithmetic midpoint for linear bins, geometric for logarithmic ones.
    pub fn midpoint(&self, i: usize) -> f64 {
        match self.mode {
            BinMode::Linear => 0.5 * (self.edges[i] + self.edges[i + 1]),
            BinMode::Logarithmic => (self.edges[i] * self.edges[i + 1]).sqrt(),
        }
    }

    /// `counts[i] / (total · width[i])`.
    pub fn density(&self, i: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts[i] as f64 / (self.total as f64 * self.width(i))
    }

    pub fn densities(&self) -> Vec<f64> {
        (0..self.n_bins()).map(|i| self.density(i)).collect()
    }

    /// Index of the most populated bin by density (first one on ties).
    pub fn mode_bin(&self) -> usize {
        let mut best = 0;
        let mut best_density = f64::NEG_INFINITY;
        for i in 0..self.n_bins() {
            let d = self.density(i);
            if d > best_density {
                best = i;
                best_density = d;
            }
        }
        best
    }

    pub fn integral(&self) -> f64 {
        (0..self.n_bins())
            .map(|i| self.density(i) * self.width(i))
            .sum()
    }

    /// Least-squares slope of `ln density` against `ln midpoint` over bins
    /// holding at least `min_count` samples.
    pub fn loglog_slope(&self, min_count: u64) -> Option<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..self.n_bins())
            .filter(|&i| self.counts[i] >= min_count.max(1) && self.midpoint(i) > 0.0)
            .map(|i| (self.midpoint(i).ln(), self.density(i).ln()))
            .unzip();
        least_squares_slope(&xs, &ys)
    }
}

/// Histogram of `samples`. Linear bins span `[0, max]`; logarithmic bins
/// span `[min positive, max]` with non-positive samples tallied in
/// `zero_count`.
pub fn histogram(samples: &[f64], n_bins: usize, mode: BinMode) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if n_bins < 2 {
        return Err(Error::TooFewBins(n_bins));
    }
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut h = match mode {
        BinMode::Linear => {
            let hi = if max > 0.0 { max } else { 1.0 };
            Histogram::linear_range(0.0, hi, n_bins)?
        }
        BinMode::Logarithmic => {
            let lo = samples
                .iter()
                .copied()
                .filter(|&x| x > 0.0)
                .fold(f64::INFINITY, f64::min);
            if !lo.is_finite() {
                return Err(Error::NoPositiveSamples);
            }
            let hi = if max > lo { max } else { 2.0 * lo };
            Histogram::log_range(lo, hi, n_bins)?
        }
    };
    h.add_all(samples);
    Ok(h)
}

/// Plug-in differential entropy in nats, `−Σ pᵢ·ln(pᵢ / widthᵢ)`.
/// Empty bins contribute nothing; an empty histogram has entropy 0.
pub fn shannon_entropy(h: &Histogram) -> f64 {
    if h.total == 0 {
        return 0.0;
    }
    let total = h.total as f64;
    -(0..h.n_bins())
        .filter(|&i| h.counts[i] > 0)
        .map(|i| {
            let p = h.counts[i] as f64 / total;
            p * (p / h.width(i)).ln()
        })
        .sum::<f64>()
}

/// Gini coefficient `Σᵢⱼ|xᵢ − xⱼ| / (2n²·mean)`, evaluated through the
/// sorted-sample identity `Σᵢ (2i − n − 1)·x₍ᵢ₎ / (n·Σx)`.
pub fn gini(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if let Some(&x) = samples.iter().find(|&&x| x.is_nan() || x < 0.0) {
        return Err(Error::Negative {
            what: "sample",
            value: x,
        });
    }
    let mut sorted = samples.to_vec();
    // Stable sort: equal values keep index order.
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let sum: f64 = sorted.iter().sum();
    if sum <= 0.0 {
        return Err(Error::AllZero);
    }
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    Ok((weighted / (n * sum)).clamp(0.0, 1.0))
}

/// Method-of-moments Gamma fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub shape: f64,
    pub scale: f64,
}

impl GammaFit {
    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }
}

pub fn mean_variance(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Ok((mean, var))
}

/// `shape = mean²/variance`, `scale = variance/mean`, with the second
/// central moment as variance.
pub fn fit_gamma_moments(samples: &[f64]) -> Result<GammaFit> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            have: samples.len(),
        });
    }
    let (mean, var) = mean_variance(samples)?;
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    if mean <= 0.0 {
        return Err(Error::Negative {
            what: "sample mean",
            value: mean,
        });
    }
    Ok(GammaFit {
        shape: mean * mean / var,
        scale: var / mean,
    })
}

/// Hill estimate of a power-law tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// Index `a` in `P(X > x) ~ x^(−a)`.
    pub exponent_ccdf: f64,
    /// Density exponent, always `exponent_ccdf + 1`.
    pub exponent_pdf: f64,
    pub top_fraction: f64,
    pub k_used: usize,
    /// `exponent_ccdf / √k`.
    pub stderr: f64,
    /// The `(k+1)`-th largest sample.
    pub threshold: f64,
}

fn sorted_descending(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn hill_sorted(desc: &[f64], top_fraction: f64) -> Result<TailFit> {
    if !(top_fraction > 0.0 && top_fraction < 1.0) {
        return Err(Error::ProbabilityOutOfRange(top_fraction));
    }
    let k = (top_fraction * desc.len() as f64).floor() as usize;
    if k < MIN_TAIL_K {
        return Err(Error::TooFewTailSamples(k));
    }
    if k >= desc.len() {
        return Err(Error::TooFewSamples {
            need: k + 1,
            have: desc.len(),
        });
    }
    let threshold = desc[k];
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::NonPositiveThreshold(threshold));
    }
    let log_excess: f64 = desc[..k].iter().map(|&x| (x / threshold).ln()).sum();
    let exponent_ccdf = k as f64 / log_excess;
    Ok(TailFit {
        exponent_ccdf,
        exponent_pdf: exponent_ccdf + 1.0,
        top_fraction,
        k_used: k,
        stderr: exponent_ccdf / (k as f64).sqrt(),
        threshold,
    })
}

/// Hill estimator over the `k = ⌊top_fraction·n⌋` largest samples:
/// `a = k / Σᵢ₌₁..ₖ ln(x₍ᵢ₎ / x₍ₖ₊₁₎)`.
pub fn hill_tail(samples: &[f64], top_fraction: f64) -> Result<TailFit> {
    hill_sorted(&sorted_descending(samples), top_fraction)
}

/// Hill estimates at several top fractions and whether they agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauCheck {
    pub fits: Vec<TailFit>,
    /// Set when some pair of estimates differs by more than
    /// [`PLATEAU_SIGMAS`] combined standard errors.
    pub no_plateau: bool,
}

/// Runs [`hill_tail`] at each of [`PLATEAU_FRACTIONS`]. A genuine power
/// tail gives a stable estimate; a thinner tail drifts upward as the
/// fraction shrinks.
pub fn tail_plateau(samples: &[f64]) -> Result<PlateauCheck> {
    tail_plateau_at(samples, &PLATEAU_FRACTIONS)
}

pub fn tail_plateau_at(samples: &[f64], fractions: &[f64]) -> Result<PlateauCheck> {
    let desc = sorted_descending(samples);
    let fits = fractions
        .iter()
        .map(|&f| hill_sorted(&desc, f))
        .collect::<Result<Vec<_>>>()?;
    let mut no_plateau = false;
    for (a, fa) in fits.iter().enumerate() {
        for fb in &fits[a + 1..] {
            let combined = fa.stderr.hypot(fb.stderr);
            if (fa.exponent_ccdf - fb.exponent_ccdf).abs() > PLATEAU_SIGMAS * combined {
                no_plateau = true;
            }
        }
    }
    Ok(PlateauCheck { fits, no_plateau })
}

/// Sup-distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    });
    Ok(d.clamp(0.0, 1.0))
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Empirical tail probabilities `(value, P(X ≥ value))`, one point per
/// distinct value, sorted by value descending.
pub fn ccdf_points(samples: &[f64]) -> Vec<(f64, f64)> {
    let desc = sorted_descending(samples);
    let n = desc.len() as f64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, &x) in desc.iter().enumerate() {
        let p = (i as f64 + 1.0) / n;
        match points.last_mut() {
            Some(last) if last.0 == x => last.1 = p,
            _ => points.push((x, p)),
        }
    }
    points
}

/// Least-squares slope of `ln P` against `ln value` for CCDF points whose
/// value lies in `[lo, hi]`.
pub fn ccdf_slope(points: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|&&(x, p)| x >= lo && x <= hi && x > 0.0 && p > 0.0)
        .map(|&(x, p)| (x.ln(), p.ln()))
        .unzip();
    least_squares_slope(&xs, &ys)
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
