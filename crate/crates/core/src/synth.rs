//! Seeded generators with known ground truth.
//!
//! Each generator fixes scores, a subpopulation, and exact per-observation
//! success probabilities, then draws the outcomes from Bernoulli trials at
//! those probabilities. The probabilities stay available, so the noiseless
//! expected curve every sampled curve is estimating can be computed exactly.
//!
//! All randomness comes from ChaCha8 seeded with the generator's `seed`:
//! stream 0 drives structural choices (subset selection, permutations) and
//! stream 1 drives the outcome draws, so the same seed always reproduces
//! the same data on every platform.

use crate::calibration::CalibrationData;
use crate::curve::{cumulative_curve, CumulativeCurve};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A sampled dataset together with the exact success probabilities its
/// results were drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Per-observation probability that the result is 1.
    pub probs: Vec<f64>,
    pub dataset: Dataset,
}

/// A sampled calibration dataset together with the exact probabilities the
/// outcomes were drawn from (which may differ from the predictions).
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTruth {
    /// True success probability per observation.
    pub probs: Vec<f64>,
    pub data: CalibrationData,
}

/// Shape of miscalibration for [`gen_calibration`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibKind {
    /// True probabilities deviate linearly in the observation rank.
    Linear,
    /// Predictions run above the truth, worst near predictions of 0.25,
    /// except for a perfectly calibrated notch right around 0.25.
    OverconfidentNotch,
    /// Oscillating miscalibration with predictions denser near 1.
    Complex,
}

impl std::str::FromStr for CalibKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "overconfident-notch" => Ok(Self::OverconfidentNotch),
            "complex" => Ok(Self::Complex),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

const NOTCH_M: usize = 50_000;
const NOTCH_N: usize = 5_000;
/// Score interval over which the notch subpopulation matches the full
/// population exactly, so the expected curve is flat there.
pub const NOTCH_SCORE_INTERVAL: (f64, f64) = (0.225, 0.275);
/// A score interval of designed positive deviation for the notch example;
/// the exact expected secant slope over it comes from [`expected_curve`].
pub const NOTCH_DEVIATION_INTERVAL: (f64, f64) = (0.05, 0.2);

const SMOOTH_M: usize = 50_000;
const SMOOTH_N: usize = 3_300;
const SMOOTH_PERIODS: f64 = 4.0;

const STEP_M: usize = 50_000;
const STEP_N: usize = 2_500;
const STEP_COUNT: usize = 8;

const OUTLIER_M: usize = 50_000;
const OUTLIER_N: usize = 2_500;
/// Score the outliers cluster around.
pub const OUTLIER_TARGET_SCORE: f64 = 0.75;
/// Weight of the single subpopulation outlier (`0.02 * n`).
pub const SUBPOP_OUTLIER_WEIGHT: f64 = 0.02 * OUTLIER_N as f64;
/// Weight of each of the two neighboring full-population outliers
/// (`0.002 * m`).
pub const FULL_OUTLIER_WEIGHT: f64 = 0.002 * OUTLIER_M as f64;

/// Membership test for the notch subpopulation over 1-based ranks: every
/// 20th observation, plus three nested windows of progressively denser
/// refinement centered on the middle of the score range (where scores of
/// 0.25 sit). The windows and strides are chosen so the union holds exactly
/// 5,000 indices.
fn notch_member(j: usize) -> bool {
    j % 20 == 0
        || (j % 20 == 10 && (18_751..=31_250).contains(&j))
        || (j % 10 == 5 && (21_876..=28_125).contains(&j))
        || ((23_438..=26_562).contains(&j) && matches!(j % 5, 1 | 3))
}

fn notch_ramp(score: f64) -> f64 {
    let half_notch = 0.5 * (NOTCH_SCORE_INTERVAL.1 - NOTCH_SCORE_INTERVAL.0);
    let center = 0.5 * (NOTCH_SCORE_INTERVAL.0 + NOTCH_SCORE_INTERVAL.1);
    let shoulder = 0.05;
    (((score - center).abs() - half_notch) / shoulder).clamp(0.0, 1.0)
}

/// Subpopulation outcomes elevated above a flat full-population baseline
/// everywhere except a notch around scores of 0.25, with scores denser near
/// 0 than near 1. `m` = 50,000, `n` = 5,000.
pub fn gen_notch(seed: u64) -> GroundTruth {
    let m = NOTCH_M;
    let scores: Vec<f64> = (1..=m)
        .map(|j| {
            let u = (j as f64 - 0.5) / m as f64;
            u * u
        })
        .collect();
    let subpop: Vec<usize> = (1..=m)
        .filter(|&j| notch_member(j))
        .map(|j| j - 1)
        .collect();
    debug_assert_eq!(subpop.len(), NOTCH_N);
    let base = 0.35;
    let dev_max = 0.25;
    let mut probs = vec![base; m];
    for &i in &subpop {
        probs[i] = base + dev_max * notch_ramp(scores[i]);
    }
    assemble(scores, probs, None, subpop, seed)
}

/// Subpopulation outcomes oscillating smoothly across the score range, with
/// subpopulation ranks denser at low scores. `m` = 50,000, `n` = 3,300.
pub fn gen_smooth_oscillation(seed: u64) -> GroundTruth {
    let m = SMOOTH_M;
    let scores: Vec<f64> = (1..=m).map(|j| (j as f64 - 0.5) / m as f64).collect();
    // consecutive ranks raised to the 4/3 power land more than one apart,
    // so the rounded values are already distinct and increasing
    let subpop: Vec<usize> = (1..=SMOOTH_N)
        .map(|j| (j as f64).powf(4.0 / 3.0).round() as usize - 1)
        .collect();
    debug_assert!(subpop.last().copied().unwrap_or(0) < m);
    let mut probs = vec![0.5; m];
    for &i in &subpop {
        probs[i] = 0.5 + 0.3 * (2.0 * std::f64::consts::PI * SMOOTH_PERIODS * scores[i]).sin();
    }
    assemble(scores, probs, None, subpop, seed)
}

/// Subpopulation outcomes oscillating in discrete steps, with scores denser
/// near 1 and a seeded random subpopulation. `m` = 50,000, `n` = 2,500.
pub fn gen_step_oscillation(seed: u64) -> GroundTruth {
    let m = STEP_M;
    let scores: Vec<f64> = (1..=m)
        .map(|j| ((j as f64 - 0.5) / m as f64).sqrt())
        .collect();
    let subpop = random_subset(m, STEP_N, seed);
    let mut probs = vec![0.5; m];
    for &i in &subpop {
        let level = (scores[i] * STEP_COUNT as f64).floor() as usize;
        probs[i] = if level % 2 == 0 { 0.8 } else { 0.2 };
    }
    assemble(scores, probs, None, subpop, seed)
}

/// Weighted data with three heavy outliers near scores of 0.75: one
/// subpopulation member with success probability 1 and weight `0.02 * n`,
/// flanked by two full-population members with probabilities 1 and 0 and
/// weight `0.002 * m` each. Everything else carries weight 1, with the
/// subpopulation's probability pinned at 0 beneath a full-population
/// oscillation over [0, 0.2].
pub fn gen_weighted_outliers(seed: u64) -> GroundTruth {
    let m = OUTLIER_M;
    let scores: Vec<f64> = (1..=m).map(|j| (j as f64 - 0.5) / m as f64).collect();
    let subpop = random_subset(m, OUTLIER_N, seed);
    let mut in_subpop = vec![false; m];
    for &i in &subpop {
        in_subpop[i] = true;
    }
    let mut probs: Vec<f64> = scores
        .iter()
        .map(|&s| 0.1 * (1.0 - (2.0 * std::f64::consts::PI * 4.0 * s).cos()))
        .collect();
    for &i in &subpop {
        probs[i] = 0.0;
    }
    let mut weights = vec![1.0; m];

    // the subpopulation member closest to the target score becomes the
    // heavy outlier
    let outlier = *subpop
        .iter()
        .min_by(|&&a, &&b| {
            let da = (scores[a] - OUTLIER_TARGET_SCORE).abs();
            let db = (scores[b] - OUTLIER_TARGET_SCORE).abs();
            da.partial_cmp(&db).expect("scores are finite")
        })
        .expect("subpopulation is nonempty");
    probs[outlier] = 1.0;
    weights[outlier] = SUBPOP_OUTLIER_WEIGHT;

    // the nearest non-subpopulation neighbors on either side
    let below = (0..outlier).rev().find(|&i| !in_subpop[i]);
    let above = (outlier + 1..m).find(|&i| !in_subpop[i]);
    if let Some(i) = below {
        probs[i] = 1.0;
        weights[i] = FULL_OUTLIER_WEIGHT;
    }
    if let Some(i) = above {
        probs[i] = 0.0;
        weights[i] = FULL_OUTLIER_WEIGHT;
    }

    assemble(scores, probs, Some(weights), subpop, seed)
}

/// Calibration data with a known miscalibration shape. Predictions are the
/// sorted `probs` of the returned data; the true probabilities deviate from
/// them per `kind`.
pub fn gen_calibration(kind: CalibKind, n: usize, seed: u64) -> Result<CalibrationTruth> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let ranks: Vec<f64> = (1..=n).map(|k| (k as f64 - 0.5) / n as f64).collect();
    let (predictions, probs): (Vec<f64>, Vec<f64>) = match kind {
        CalibKind::Linear => {
            let predictions = ranks.clone();
            let probs = ranks
                .iter()
                .map(|&u| (u + 0.1 * u).clamp(0.0, 1.0))
                .collect();
            (predictions, probs)
        }
        CalibKind::OverconfidentNotch => {
            let predictions: Vec<f64> = ranks.iter().map(|&u| u * u).collect();
            let probs = predictions
                .iter()
                .map(|&s| (s - overconfidence(s)).clamp(0.0, 1.0))
                .collect();
            (predictions, probs)
        }
        CalibKind::Complex => {
            let predictions: Vec<f64> = ranks.iter().map(|&u| u.sqrt()).collect();
            let probs = predictions
                .iter()
                .map(|&s| {
                    let wiggle = 0.4 * s * (1.0 - s) * (3.0 * 2.0 * std::f64::consts::PI * s).sin();
                    (s + wiggle).clamp(0.0, 1.0)
                })
                .collect();
            (predictions, probs)
        }
    };
    let outcomes = bernoulli_draws(&probs, seed);
    Ok(CalibrationTruth {
        probs,
        data: CalibrationData::new(predictions, outcomes)?,
    })
}

/// Overconfidence profile: a tent peaking at predictions of 0.25, zeroed
/// inside a narrow notch right around 0.25.
fn overconfidence(s: f64) -> f64 {
    let tent = if s <= 0.25 {
        s / 0.25
    } else {
        ((0.6 - s) / 0.35).max(0.0)
    };
    let gate = (((s - 0.25).abs() - 0.015) / 0.02).clamp(0.0, 1.0);
    0.15 * tent * gate
}

/// Null calibration data: outcomes drawn from exactly the predicted
/// probabilities, which are denser near 0. Any apparent miscalibration is
/// pure sampling noise.
pub fn gen_null(n: usize, seed: u64) -> Result<CalibrationTruth> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let predictions: Vec<f64> = (1..=n)
        .map(|k| {
            let u = (k as f64 - 0.5) / n as f64;
            u * u
        })
        .collect();
    let probs = predictions.clone();
    let outcomes = bernoulli_draws(&probs, seed);
    Ok(CalibrationTruth {
        probs,
        data: CalibrationData::new(predictions, outcomes)?,
    })
}

/// The noiseless curve a sampled curve estimates: the cumulative
/// computation with every result replaced by its expected value, including
/// inside the binned full-population averages.
pub fn expected_curve(gt: &GroundTruth) -> CumulativeCurve {
    let dataset = Dataset::new(
        gt.dataset.scores().to_vec(),
        gt.probs.clone(),
        Some(gt.dataset.weights().to_vec()),
        gt.dataset.subpop().to_vec(),
    )
    .expect("ground truth datasets are valid");
    cumulative_curve(&dataset)
}

fn random_subset(m: usize, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let mut all: Vec<usize> = (0..m).collect();
    all.shuffle(&mut rng);
    let mut subset: Vec<usize> = all.into_iter().take(n).collect();
    subset.sort_unstable();
    subset
}

fn bernoulli_draws(probs: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    probs
        .iter()
        .map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
        .collect()
}

fn assemble(
    scores: Vec<f64>,
    probs: Vec<f64>,
    weights: Option<Vec<f64>>,
    subpop: Vec<usize>,
    seed: u64,
) -> GroundTruth {
    let results = bernoulli_draws(&probs, seed);
    let dataset = Dataset::new(scores, results, weights, subpop)
        .expect("generator construction satisfies all dataset invariants");
    GroundTruth { probs, dataset }
}
