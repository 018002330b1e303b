//! Cumulative assessment of probabilistic calibration.
//!
//! Predictions are probabilities of success and outcomes are the observed
//! 0/1 results. The cumulative response minus the cumulative predicted
//! probability plays the role the subpopulation-versus-population gap plays
//! elsewhere in this crate: miscalibration over a range of predicted
//! probabilities is the slope of the secant line over that range, and the
//! noise scale comes from the Bernoulli variances of the predictions
//! themselves.

use crate::binning::{binned_averages, BinScheme, ReliabilityDiagram};
use crate::curve::{summary_stats, CumulativeCurve, SummaryStats};
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sorted predicted probabilities paired with observed binary outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationData {
    probs: Vec<f64>,
    outcomes: Vec<f64>,
}

impl CalibrationData {
    /// Validates predictions (sorted, within `[0, 1]`) and outcomes (each
    /// exactly 0 or 1).
    ///
    /// Ties are tolerated: the cumulative sums and the binning sweeps need
    /// only the weak ordering, and bootstrap resampling necessarily
    /// duplicates observations. Ingestion of raw data still perturbs tied
    /// predictions apart so real datasets arrive strictly increasing.
    pub fn new(probs: Vec<f64>, outcomes: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyInput);
        }
        if outcomes.len() != probs.len() {
            return Err(Error::LengthMismatch {
                scores: probs.len(),
                results: outcomes.len(),
                weights: probs.len(),
            });
        }
        for (index, &p) in probs.iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange { index, value: p });
            }
        }
        for (index, &r) in outcomes.iter().enumerate() {
            if r != 0.0 && r != 1.0 {
                return Err(Error::NonBinaryOutcome { index, value: r });
            }
        }
        for (index, pair) in probs.windows(2).enumerate() {
            if pair[0] > pair[1] {
                return Err(Error::ScoresNotIncreasing { index });
            }
        }
        Ok(Self { probs, outcomes })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty data
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }
}

/// Cumulative miscalibration curve: observed cumulative response minus the
/// cumulative predicted probability, one point per observation.
///
/// `sigma` is the standard deviation of the final ordinate when every
/// outcome really is a Bernoulli draw at its predicted probability.
pub fn calib_curve(data: &CalibrationData) -> CumulativeCurve {
    let n = data.len();
    let inv = 1.0 / n as f64;
    let mut response_cum = 0.0;
    let mut predicted_cum = 0.0;
    let mut abscissae = Vec::with_capacity(n);
    let mut ordinates = Vec::with_capacity(n);
    for k in 0..n {
        response_cum += data.outcomes[k];
        predicted_cum += data.probs[k];
        abscissae.push((k + 1) as f64 * inv);
        ordinates.push(response_cum * inv - predicted_cum * inv);
    }
    let var_sum: f64 = data.probs.iter().map(|&p| p * (1.0 - p)).sum();
    CumulativeCurve {
        abscissae,
        ordinates,
        scores_at: data.probs.clone(),
        sigma: var_sum.sqrt() * inv,
        n,
        weighted: false,
    }
}

/// Scalar summaries of a calibration curve; identical contracts to the
/// subpopulation statistics, normalized by the curve's Bernoulli `sigma`.
pub fn calib_stats(curve: &CumulativeCurve) -> SummaryStats {
    summary_stats(curve)
}

/// Classical calibration reliability diagram: per-bin observed success
/// frequency against per-bin mean predicted probability. The diagram
/// carries the ideal diagonal as its reference instead of a second
/// population.
pub fn calib_reliability(data: &CalibrationData, scheme: &BinScheme) -> Result<ReliabilityDiagram> {
    diagram_from_sorted(&data.probs, &data.outcomes, scheme)
}

/// Bootstrap resamples of the reliability diagram, for drawing confidence
/// bands: each replicate draws `n` observations with replacement, re-sorts
/// them, and bins them the same way.
///
/// Replicates are deterministic given `seed`; replicate `r` uses stream `r`
/// of the seeded generator, so they may also be computed independently.
pub fn bootstrap_bands(
    data: &CalibrationData,
    scheme: &BinScheme,
    reps: usize,
    seed: u64,
) -> Result<Vec<ReliabilityDiagram>> {
    if reps == 0 {
        return Err(Error::ZeroReplicates);
    }
    let n = data.len();
    let mut bands = Vec::with_capacity(reps);
    for rep in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(rep as u64);
        let mut chosen: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        // sort by probability; duplicated draws keep their original order
        chosen.sort_by(|&a, &b| {
            data.probs[a]
                .partial_cmp(&data.probs[b])
                .expect("probabilities are finite")
                .then(a.cmp(&b))
        });
        let probs: Vec<f64> = chosen.iter().map(|&i| data.probs[i]).collect();
        let outcomes: Vec<f64> = chosen.iter().map(|&i| data.outcomes[i]).collect();
        bands.push(diagram_from_sorted(&probs, &outcomes, scheme)?);
    }
    Ok(bands)
}

/// Diagram over already-sorted pairs. Resampled data may contain ties; the
/// binning sweep only needs the weak ordering.
fn diagram_from_sorted(
    probs: &[f64],
    outcomes: &[f64],
    scheme: &BinScheme,
) -> Result<ReliabilityDiagram> {
    let weights = vec![1.0; probs.len()];
    let binned = binned_averages(scheme, probs, outcomes, &weights)?;
    Ok(ReliabilityDiagram {
        sub_points: binned.points,
        full_points: Vec::new(),
        sub_edges: binned.edges,
        full_edges: Vec::new(),
        sub_mass: binned.mass,
        full_mass: Vec::new(),
        diagonal: true,
    })
}
