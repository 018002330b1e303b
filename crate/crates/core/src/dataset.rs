//! Scored observations with an audited subpopulation.

use crate::error::{Error, Result};

/// A full population of scored outcomes plus the index set of the
/// subpopulation under audit.
///
/// Scores must already be strictly increasing; callers that ingest raw data
/// are responsible for breaking ties (see the CLI's loader) before handing
/// records to this crate. Weights are optional at construction and default
/// to uniform. Subpopulation indices are zero-based and strictly increasing.
///
/// Instances are immutable; every operation over them is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    scores: Vec<f64>,
    results: Vec<f64>,
    weights: Vec<f64>,
    subpop: Vec<usize>,
    uniform_weights: bool,
}

impl Dataset {
    /// Validates and assembles a dataset. `weights: None` means uniform.
    pub fn new(
        scores: Vec<f64>,
        results: Vec<f64>,
        weights: Option<Vec<f64>>,
        subpop: Vec<usize>,
    ) -> Result<Self> {
        let m = scores.len();
        let weights = weights.unwrap_or_else(|| vec![1.0; m]);
        if results.len() != m || weights.len() != m {
            return Err(Error::LengthMismatch {
                scores: m,
                results: results.len(),
                weights: weights.len(),
            });
        }
        if m == 0 {
            return Err(Error::EmptyInput);
        }
        for (index, &s) in scores.iter().enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFinite {
                    field: "score",
                    index,
                });
            }
        }
        for (index, &r) in results.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::NonFinite {
                    field: "result",
                    index,
                });
            }
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite {
                    field: "weight",
                    index,
                });
            }
            if w <= 0.0 {
                return Err(Error::NonPositiveWeight { index, value: w });
            }
        }
        for (index, pair) in scores.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(Error::ScoresNotIncreasing { index });
            }
        }
        if subpop.is_empty() {
            return Err(Error::EmptySubpopulation);
        }
        for (position, &i) in subpop.iter().enumerate() {
            let out_of_range = i >= m;
            let not_increasing = position > 0 && subpop[position - 1] >= i;
            if out_of_range || not_increasing {
                return Err(Error::InvalidSubpopIndex { position, m });
            }
        }
        let uniform_weights = weights.windows(2).all(|w| w[0] == w[1]);
        Ok(Self {
            scores,
            results,
            weights,
            subpop,
            uniform_weights,
        })
    }

    /// Number of observations in the full population.
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty datasets
    }

    /// Number of subpopulation members.
    pub fn subpop_len(&self) -> usize {
        self.subpop.len()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn results(&self) -> &[f64] {
        &self.results
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Zero-based, strictly increasing indices of the subpopulation.
    pub fn subpop(&self) -> &[usize] {
        &self.subpop
    }

    /// True when all weights are exactly equal. Uniformly weighted data
    /// takes the unweighted code path, which the equal weights cancel out
    /// of exactly.
    pub fn uniform_weights(&self) -> bool {
        self.uniform_weights
    }

    /// True when every result is exactly 0 or 1.
    pub fn binary_results(&self) -> bool {
        self.results.iter().all(|&r| r == 0.0 || r == 1.0)
    }

    /// Scores of the subpopulation members, in order.
    pub fn subpop_scores(&self) -> Vec<f64> {
        self.subpop.iter().map(|&i| self.scores[i]).collect()
    }

    /// Results of the subpopulation members, in order.
    pub fn subpop_results(&self) -> Vec<f64> {
        self.subpop.iter().map(|&i| self.results[i]).collect()
    }

    /// Weights of the subpopulation members, in order.
    pub fn subpop_weights(&self) -> Vec<f64> {
        self.subpop.iter().map(|&i| self.weights[i]).collect()
    }
}
