//! Cumulative-difference curves and their scalar summaries.
//!
//! The curve tracks, as a function of rank within the subpopulation, the gap
//! between the subpopulation's cumulative average outcome and the cumulative
//! average outcome of the full population matched to the same scores. Each
//! subpopulation score gets one matching bin, bounded by midpoints between
//! consecutive subpopulation scores, so no resolution available in the data
//! is smoothed away. Deviation over a score range shows up as the slope of
//! the curve's secant line over that range; the scale of slope wiggle that
//! is pure sampling noise is captured by `sigma`.
//!
//! Weighted data runs through the same pipeline with weight-carrying sums
//! and cumulative-weight abscissae. Exactly uniform weights are detected and
//! routed through the unweighted arithmetic, which equal weights cancel out
//! of; the two paths then agree bit for bit.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use std::ops::Range;

/// Which variance estimate feeds the noise scale `sigma`.
///
/// `Auto` selects `Bernoulli` exactly when every result in the full
/// population is 0 or 1, and `Empirical` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaMode {
    #[default]
    Auto,
    Bernoulli,
    Empirical,
}

/// A cumulative-difference curve: one point per subpopulation member.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeCurve {
    /// Strictly increasing positions in (0, 1]; rank fractions for uniform
    /// weights, cumulative weight fractions otherwise. The last entry is 1.
    pub abscissae: Vec<f64>,
    /// Cumulative subpopulation average minus matched full-population
    /// average at each abscissa.
    pub ordinates: Vec<f64>,
    /// Score of the subpopulation member at each abscissa, for axis labels.
    pub scores_at: Vec<f64>,
    /// Scale of driftless random-walk fluctuation under the null of no
    /// deviation; height of the significance triangle drawn at the origin.
    pub sigma: f64,
    /// Number of subpopulation members on the curve.
    pub n: usize,
    /// True when the curve was built over non-uniform weights.
    pub weighted: bool,
}

impl CumulativeCurve {
    /// Kolmogorov-Smirnov and Kuiper summaries of this curve.
    pub fn stats(&self) -> SummaryStats {
        summary_stats(self)
    }
}

/// Scalar summaries of one curve: the raw statistics, the noise scale, and
/// the noise-normalized forms used for screening.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    /// Kolmogorov-Smirnov statistic: maximum absolute ordinate.
    pub g: f64,
    /// Kuiper statistic: range of the ordinates with the origin included.
    pub d: f64,
    pub sigma: f64,
    /// `g / sigma`; `None` when `sigma` is zero.
    pub g_normalized: Option<f64>,
    /// `d / sigma`; `None` when `sigma` is zero.
    pub d_normalized: Option<f64>,
    pub n: usize,
}

/// Bin thresholds around each subpopulation score: midpoints between
/// consecutive subpopulation scores, with open ends at the extremes.
///
/// Returns `n + 1` thresholds; bin `k` is the interval
/// `(thresholds[k], thresholds[k + 1]]`, and contains exactly one
/// subpopulation score. Empty subpopulations are rejected when the
/// [`Dataset`] is constructed.
pub fn midpoint_bins(dataset: &Dataset) -> Vec<f64> {
    let scores = dataset.scores();
    let subpop = dataset.subpop();
    let n = subpop.len();
    let mut thresholds = Vec::with_capacity(n + 1);
    thresholds.push(f64::NEG_INFINITY);
    for k in 1..n {
        thresholds.push(0.5 * (scores[subpop[k - 1]] + scores[subpop[k]]));
    }
    thresholds.push(f64::INFINITY);
    thresholds
}

/// Average result of the full population within each bin.
///
/// With uniform weights this is the plain per-bin mean; otherwise each
/// observation contributes in proportion to its weight.
pub fn binned_full_means(dataset: &Dataset, thresholds: &[f64]) -> Result<Vec<f64>> {
    let ranges = bin_ranges(dataset, thresholds)?;
    bin_means(dataset, &ranges)
}

/// The full cumulative-difference curve for `dataset`, with `sigma`
/// selected automatically (Bernoulli form for binary results, empirical
/// variance otherwise).
pub fn cumulative_curve(dataset: &Dataset) -> CumulativeCurve {
    cumulative_curve_with(dataset, SigmaMode::Auto)
}

/// [`cumulative_curve`] with an explicit variance-estimate override.
pub fn cumulative_curve_with(dataset: &Dataset, mode: SigmaMode) -> CumulativeCurve {
    let parts = CurveParts::build(dataset, mode);
    window_curve(dataset, &parts, 0..dataset.subpop_len())
}

/// Noise scale for the curve: the standard deviation of the final ordinate
/// under the null that the subpopulation matches the full population.
///
/// For binary results the per-bin variance is `mean * (1 - mean)`; otherwise
/// it is the empirical variance of the bin's results. Weighted data squares
/// the subpopulation member's weight in the numerator.
pub fn sigma_scale(dataset: &Dataset, thresholds: &[f64], binned_means: &[f64]) -> Result<f64> {
    sigma_scale_with(dataset, thresholds, binned_means, SigmaMode::Auto)
}

/// [`sigma_scale`] with an explicit variance-estimate override.
pub fn sigma_scale_with(
    dataset: &Dataset,
    thresholds: &[f64],
    binned_means: &[f64],
    mode: SigmaMode,
) -> Result<f64> {
    let n = dataset.subpop_len();
    if binned_means.len() != n {
        return Err(Error::ThresholdMismatch {
            expected: n,
            got: binned_means.len(),
        });
    }
    let var_terms = if use_bernoulli(dataset, mode) {
        bernoulli_var_terms(binned_means)
    } else {
        let ranges = bin_ranges(dataset, thresholds)?;
        empirical_var_terms(dataset, &ranges, binned_means)
    };
    Ok(combined_sigma(dataset, &var_terms, 0..n))
}

/// Maximum absolute deviation of the curve from zero.
pub fn kolmogorov_smirnov(ordinates: &[f64]) -> Result<f64> {
    if ordinates.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(ordinates.iter().fold(0.0f64, |acc, &y| acc.max(y.abs())))
}

/// Size of the range of the deviations, with the curve's implicit starting
/// point at zero included. Invariant under cyclic shifts of where the
/// cumulative sums start.
pub fn kuiper(ordinates: &[f64]) -> Result<f64> {
    if ordinates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for &y in ordinates {
        hi = hi.max(y);
        lo = lo.min(y);
    }
    Ok(hi - lo)
}

/// Scalar summaries of `curve`. Normalized statistics are `None` when the
/// noise scale is zero rather than propagating infinities.
pub fn summary_stats(curve: &CumulativeCurve) -> SummaryStats {
    let g = kolmogorov_smirnov(&curve.ordinates).expect("curve is nonempty");
    let d = kuiper(&curve.ordinates).expect("curve is nonempty");
    let sigma = curve.sigma;
    let (g_normalized, d_normalized) = if sigma > 0.0 {
        (Some(g / sigma), Some(d / sigma))
    } else {
        (None, None)
    };
    SummaryStats {
        g,
        d,
        sigma,
        g_normalized,
        d_normalized,
        n: curve.n,
    }
}

/// The curve recomputed over only the first `k_max` subpopulation members,
/// for zooming in on the origin.
///
/// Both the cumulative averages and `sigma` renormalize by `k_max` (or by
/// the restricted weight total), using only the bins that appear in the
/// restricted domain; the restricted ordinates equal the full curve's first
/// `k_max` ordinates rescaled by `n / k_max`.
pub fn restrict_curve(dataset: &Dataset, k_max: usize) -> Result<CumulativeCurve> {
    restrict_curve_with(dataset, k_max, SigmaMode::Auto)
}

/// [`restrict_curve`] with an explicit variance-estimate override.
pub fn restrict_curve_with(
    dataset: &Dataset,
    k_max: usize,
    mode: SigmaMode,
) -> Result<CumulativeCurve> {
    let n = dataset.subpop_len();
    if k_max < 1 || k_max > n {
        return Err(Error::InvalidRestriction { k_max, n });
    }
    let parts = CurveParts::build(dataset, mode);
    Ok(window_curve(dataset, &parts, 0..k_max))
}

/// The curve recomputed over the contiguous run of subpopulation members
/// whose scores fall in `[lo, hi]`, re-anchored at the run's start.
///
/// Shifting where the cumulative sums start does not change the information
/// in the slopes, so a zoom away from the origin is computed the same way
/// as a restriction to a prefix.
pub fn zoom_curve(dataset: &Dataset, lo: f64, hi: f64) -> Result<CumulativeCurve> {
    zoom_curve_with(dataset, lo, hi, SigmaMode::Auto)
}

/// [`zoom_curve`] with an explicit variance-estimate override.
pub fn zoom_curve_with(
    dataset: &Dataset,
    lo: f64,
    hi: f64,
    mode: SigmaMode,
) -> Result<CumulativeCurve> {
    let scores = dataset.scores();
    let members: Vec<usize> = dataset
        .subpop()
        .iter()
        .enumerate()
        .filter(|&(_, &i)| scores[i] >= lo && scores[i] <= hi)
        .map(|(k, _)| k)
        .collect();
    let (&first, &last) = match (members.first(), members.last()) {
        (Some(first), Some(last)) => (first, last),
        _ => return Err(Error::EmptyZoom { lo, hi }),
    };
    let parts = CurveParts::build(dataset, mode);
    Ok(window_curve(dataset, &parts, first..last + 1))
}

/// Per-bin aggregates shared by the full curve and its restrictions.
pub(crate) struct CurveParts {
    pub bin_means: Vec<f64>,
    pub var_terms: Vec<f64>,
}

impl CurveParts {
    pub(crate) fn build(dataset: &Dataset, mode: SigmaMode) -> Self {
        let thresholds = midpoint_bins(dataset);
        let ranges = bin_ranges(dataset, &thresholds).expect("midpoint thresholds are valid");
        let bin_means =
            bin_means(dataset, &ranges).expect("midpoint bins each contain their own score");
        let var_terms = if use_bernoulli(dataset, mode) {
            bernoulli_var_terms(&bin_means)
        } else {
            empirical_var_terms(dataset, &ranges, &bin_means)
        };
        Self {
            bin_means,
            var_terms,
        }
    }
}

fn use_bernoulli(dataset: &Dataset, mode: SigmaMode) -> bool {
    match mode {
        SigmaMode::Auto => dataset.binary_results(),
        SigmaMode::Bernoulli => true,
        SigmaMode::Empirical => false,
    }
}

/// Half-open index ranges of full-population members per bin, found by one
/// sweep over the sorted scores.
fn bin_ranges(dataset: &Dataset, thresholds: &[f64]) -> Result<Vec<Range<usize>>> {
    let n = dataset.subpop_len();
    if thresholds.len() != n + 1 {
        return Err(Error::ThresholdMismatch {
            expected: n + 1,
            got: thresholds.len(),
        });
    }
    for pair in thresholds.windows(2) {
        if pair[0] > pair[1] {
            return Err(Error::ThresholdMismatch {
                expected: n + 1,
                got: thresholds.len(),
            });
        }
    }
    let scores = dataset.scores();
    let m = scores.len();
    let mut ranges = Vec::with_capacity(n);
    let mut i = 0;
    while i < m && scores[i] <= thresholds[0] {
        i += 1;
    }
    for k in 0..n {
        let start = i;
        while i < m && scores[i] <= thresholds[k + 1] {
            i += 1;
        }
        ranges.push(start..i);
    }
    Ok(ranges)
}

fn bin_means(dataset: &Dataset, ranges: &[Range<usize>]) -> Result<Vec<f64>> {
    let results = dataset.results();
    let weights = dataset.weights();
    let uniform = dataset.uniform_weights();
    let mut means = Vec::with_capacity(ranges.len());
    for (bin, range) in ranges.iter().enumerate() {
        if range.is_empty() {
            return Err(Error::EmptyBin { bin });
        }
        let mean = if uniform {
            let sum: f64 = range.clone().map(|i| results[i]).sum();
            sum / range.len() as f64
        } else {
            let mut weighted = 0.0;
            let mut total = 0.0;
            for i in range.clone() {
                weighted += weights[i] * results[i];
                total += weights[i];
            }
            weighted / total
        };
        means.push(mean);
    }
    Ok(means)
}

fn bernoulli_var_terms(bin_means: &[f64]) -> Vec<f64> {
    // Rounding in a weighted mean of {0, 1} results can land a hair above 1;
    // the product must stay nonnegative.
    bin_means
        .iter()
        .map(|&m| (m * (1.0 - m)).max(0.0))
        .collect()
}

fn empirical_var_terms(dataset: &Dataset, ranges: &[Range<usize>], bin_means: &[f64]) -> Vec<f64> {
    let results = dataset.results();
    let weights = dataset.weights();
    let uniform = dataset.uniform_weights();
    ranges
        .iter()
        .zip(bin_means)
        .map(|(range, &mean)| {
            if uniform {
                let sum: f64 = range
                    .clone()
                    .map(|i| (results[i] - mean) * (results[i] - mean))
                    .sum();
                sum / range.len() as f64
            } else {
                let mut weighted = 0.0;
                let mut total = 0.0;
                for i in range.clone() {
                    let dev = results[i] - mean;
                    weighted += weights[i] * dev * dev;
                    total += weights[i];
                }
                weighted / total
            }
        })
        .collect()
}

/// Noise scale over a window of subpopulation positions.
fn combined_sigma(dataset: &Dataset, var_terms: &[f64], window: Range<usize>) -> f64 {
    let subpop = dataset.subpop();
    let weights = dataset.weights();
    if dataset.uniform_weights() {
        let sum: f64 = var_terms[window.clone()].iter().sum();
        sum.sqrt() / window.len() as f64
    } else {
        let mut numerator = 0.0;
        let mut total = 0.0;
        for k in window {
            let w = weights[subpop[k]];
            numerator += w * w * var_terms[k];
            total += w;
        }
        numerator.sqrt() / total
    }
}

/// Assembles the curve over a window of subpopulation positions, summing
/// left to right in index order.
fn window_curve(dataset: &Dataset, parts: &CurveParts, window: Range<usize>) -> CumulativeCurve {
    let subpop = dataset.subpop();
    let results = dataset.results();
    let scores = dataset.scores();
    let weights = dataset.weights();
    let uniform = dataset.uniform_weights();
    let count = window.len();

    let mut abscissae = Vec::with_capacity(count);
    let mut ordinates = Vec::with_capacity(count);
    let mut scores_at = Vec::with_capacity(count);

    if uniform {
        let inv = 1.0 / count as f64;
        let mut sub_cum = 0.0;
        let mut full_cum = 0.0;
        for (rank, k) in window.clone().enumerate() {
            let i = subpop[k];
            sub_cum += results[i];
            full_cum += parts.bin_means[k];
            abscissae.push((rank + 1) as f64 * inv);
            ordinates.push(sub_cum * inv - full_cum * inv);
            scores_at.push(scores[i]);
        }
    } else {
        let total: f64 = window.clone().map(|k| weights[subpop[k]]).sum();
        let mut sub_cum = 0.0;
        let mut full_cum = 0.0;
        let mut weight_cum = 0.0;
        for k in window.clone() {
            let i = subpop[k];
            let w = weights[i];
            sub_cum += w * results[i];
            full_cum += w * parts.bin_means[k];
            weight_cum += w;
            abscissae.push(weight_cum / total);
            ordinates.push(sub_cum / total - full_cum / total);
            scores_at.push(scores[i]);
        }
    }

    let sigma = combined_sigma(dataset, &parts.var_terms, window);
    CumulativeCurve {
        abscissae,
        ordinates,
        scores_at,
        sigma,
        n: count,
        weighted: !uniform,
    }
}
