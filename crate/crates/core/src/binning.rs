//! Classical reliability diagrams and the bin-selection strategies behind
//! them.
//!
//! Three strategies are supported: thresholds equispaced along the scores,
//! bins holding an equal number of scores, and bins grown until the ratio of
//! the 2-norm to the 1-norm of the bin's weights falls to a common target.
//! The last generalizes equal counts to weighted data; with uniform weights
//! it reproduces near-equal counts per bin.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::Range;

/// Bin-selection strategy for reliability diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinKind {
    /// Thresholds equispaced between the smallest and largest score.
    EquispacedScores,
    /// Every bin holds the same number of scores, with any remainder going
    /// to the rightmost bin.
    EqualCount,
    /// Bins grown until `norm2(weights) / norm1(weights)` drops to a target
    /// estimated from a seeded random sample of the weights; the bin count
    /// comes out close to the requested one rather than exactly equal.
    EqualNormRatio,
}

/// A bin-selection request: the strategy, the (target) number of bins, and
/// the seed consumed by the equal-norm-ratio strategy's random permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinScheme {
    pub kind: BinKind,
    pub target_bins: usize,
    pub seed: u64,
}

impl BinScheme {
    pub fn new(kind: BinKind, target_bins: usize, seed: u64) -> Result<Self> {
        if target_bins == 0 {
            return Err(Error::ZeroBins);
        }
        Ok(Self {
            kind,
            target_bins,
            seed,
        })
    }
}

/// A classical binned diagram: per-bin average score and average result for
/// the subpopulation and for the full population.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityDiagram {
    /// `(mean score, mean result)` per nonempty subpopulation bin.
    pub sub_points: Vec<(f64, f64)>,
    /// `(mean score, mean result)` per nonempty full-population bin; empty
    /// for calibration diagrams, which carry the diagonal instead.
    pub full_points: Vec<(f64, f64)>,
    /// Interior bin thresholds for the subpopulation side.
    pub sub_edges: Vec<f64>,
    /// Interior bin thresholds for the full-population side.
    pub full_edges: Vec<f64>,
    /// Weight (or count, under unit weights) per subpopulation bin,
    /// including zero entries for empty bins.
    pub sub_mass: Vec<f64>,
    /// Weight per full-population bin, including zero entries.
    pub full_mass: Vec<f64>,
    /// Draw the ideal reference line from (0, 0) to (1, 1); set for
    /// calibration diagrams.
    pub diagonal: bool,
}

/// Interior bin thresholds under `scheme` for sorted `scores` with positive
/// `weights`. Returns `bins - 1` thresholds for the first two strategies;
/// the equal-norm-ratio strategy determines its own bin count.
pub fn bin_edges(scheme: &BinScheme, scores: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    Ok(bin_partition(scheme, scores, weights)?.edges)
}

/// Reliability diagram for `dataset`: the subpopulation binned by
/// `sub_scheme` over its own scores, the full population binned by
/// `full_scheme`, both averaged with the dataset's weights.
pub fn reliability_diagram(
    dataset: &Dataset,
    sub_scheme: &BinScheme,
    full_scheme: &BinScheme,
) -> Result<ReliabilityDiagram> {
    let sub_scores = dataset.subpop_scores();
    let sub_results = dataset.subpop_results();
    let sub_weights = dataset.subpop_weights();
    let sub = binned_averages(sub_scheme, &sub_scores, &sub_results, &sub_weights)?;
    let full = binned_averages(
        full_scheme,
        dataset.scores(),
        dataset.results(),
        dataset.weights(),
    )?;
    Ok(ReliabilityDiagram {
        sub_points: sub.points,
        full_points: full.points,
        sub_edges: sub.edges,
        full_edges: full.edges,
        sub_mass: sub.mass,
        full_mass: full.mass,
        diagonal: false,
    })
}

#[derive(Debug)]
pub(crate) struct BinPartition {
    pub edges: Vec<f64>,
    pub ranges: Vec<Range<usize>>,
}

pub(crate) struct BinnedAverages {
    pub points: Vec<(f64, f64)>,
    pub edges: Vec<f64>,
    pub mass: Vec<f64>,
}

/// Per-bin weighted averages of `(scores, values)`; empty bins contribute a
/// zero mass entry but no point.
pub(crate) fn binned_averages(
    scheme: &BinScheme,
    scores: &[f64],
    values: &[f64],
    weights: &[f64],
) -> Result<BinnedAverages> {
    let partition = bin_partition(scheme, scores, weights)?;
    let uniform = weights.windows(2).all(|w| w[0] == w[1]);
    let mut points = Vec::with_capacity(partition.ranges.len());
    let mut mass = Vec::with_capacity(partition.ranges.len());
    for range in &partition.ranges {
        if range.is_empty() {
            mass.push(0.0);
            continue;
        }
        if uniform {
            // equal weights cancel out of the averages; mass still reports
            // the weight carried by the bin
            let count = range.len() as f64;
            let score_sum: f64 = range.clone().map(|i| scores[i]).sum();
            let value_sum: f64 = range.clone().map(|i| values[i]).sum();
            points.push((score_sum / count, value_sum / count));
            mass.push(weights[range.start] * count);
        } else {
            let mut total = 0.0;
            let mut score_sum = 0.0;
            let mut value_sum = 0.0;
            for i in range.clone() {
                total += weights[i];
                score_sum += weights[i] * scores[i];
                value_sum += weights[i] * values[i];
            }
            points.push((score_sum / total, value_sum / total));
            mass.push(total);
        }
    }
    Ok(BinnedAverages {
        points,
        edges: partition.edges,
        mass,
    })
}

/// Splits sorted `scores` into bins under `scheme`, producing both the
/// interior thresholds and the index range each bin covers. Ties in the
/// scores (possible in bootstrap resamples) are handled by the sequential
/// sweep: membership only ever needs the weak ordering.
pub(crate) fn bin_partition(
    scheme: &BinScheme,
    scores: &[f64],
    weights: &[f64],
) -> Result<BinPartition> {
    let count = scores.len();
    if count == 0 {
        return Err(Error::EmptyInput);
    }
    if weights.len() != count {
        return Err(Error::LengthMismatch {
            scores: count,
            results: count,
            weights: weights.len(),
        });
    }
    let bins = scheme.target_bins;
    if bins == 0 {
        return Err(Error::ZeroBins);
    }
    if bins > count {
        return Err(Error::TooManyBins {
            requested: bins,
            available: count,
        });
    }
    match scheme.kind {
        BinKind::EquispacedScores => {
            let lo = scores[0];
            let hi = scores[count - 1];
            let mut edges = Vec::with_capacity(bins - 1);
            for k in 1..bins {
                edges.push(lo + (hi - lo) * k as f64 / bins as f64);
            }
            let mut ranges = Vec::with_capacity(bins);
            let mut i = 0;
            for &edge in &edges {
                let start = i;
                while i < count && scores[i] <= edge {
                    i += 1;
                }
                ranges.push(start..i);
            }
            ranges.push(i..count);
            Ok(BinPartition { edges, ranges })
        }
        BinKind::EqualCount => {
            let per_bin = count / bins;
            let mut ranges = Vec::with_capacity(bins);
            for k in 0..bins {
                let start = k * per_bin;
                let end = if k + 1 == bins {
                    count
                } else {
                    start + per_bin
                };
                ranges.push(start..end);
            }
            let edges = edges_between(scores, &ranges);
            Ok(BinPartition { edges, ranges })
        }
        BinKind::EqualNormRatio => {
            let target = norm_ratio_target(weights, bins, scheme.seed);
            let mut ranges: Vec<Range<usize>> = Vec::new();
            let mut start = 0;
            while start < count {
                let mut sq_sum = 0.0;
                let mut sum = 0.0;
                let mut end = start;
                loop {
                    let w = weights[end];
                    sq_sum += w * w;
                    sum += w;
                    end += 1;
                    if sq_sum.sqrt() / sum <= target || end == count {
                        break;
                    }
                }
                ranges.push(start..end);
                start = end;
            }
            // A runt final bin would carry much noisier averages than its
            // neighbors; fold it into the previous bin.
            if ranges.len() >= 2 {
                let last = ranges[ranges.len() - 1].len();
                let prev = ranges[ranges.len() - 2].len();
                if 2 * last < prev {
                    let tail = ranges.pop().expect("len checked");
                    let head = ranges.pop().expect("len checked");
                    ranges.push(head.start..tail.end);
                }
            }
            let edges = edges_between(scores, &ranges);
            Ok(BinPartition { edges, ranges })
        }
    }
}

/// Norm-ratio target estimated from a seeded uniformly random sample of
/// `count / bins` weights, drawn without replacement.
fn norm_ratio_target(weights: &[f64], bins: usize, seed: u64) -> f64 {
    let sample = weights.len() / bins;
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut sq_sum = 0.0;
    let mut sum = 0.0;
    for &i in order.iter().take(sample) {
        sq_sum += weights[i] * weights[i];
        sum += weights[i];
    }
    sq_sum.sqrt() / sum
}

/// Interior thresholds at the midpoints between the scores that straddle
/// consecutive bins.
fn edges_between(scores: &[f64], ranges: &[Range<usize>]) -> Vec<f64> {
    ranges
        .windows(2)
        .map(|pair| 0.5 * (scores[pair[0].end - 1] + scores[pair[1].start]))
        .collect()
}
