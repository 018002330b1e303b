//! Brute-force reference implementation used only by the acceptance suite.
//!
//! Every quantity is evaluated by direct nested loops over the displayed
//! formula it checks, with no shared code or shared intermediate state with
//! the library implementation: thresholds are rebuilt from scratch, every
//! cumulative sum restarts from its first term, and bin membership is a
//! full scan per bin. Quadratic cost is the point.

#![allow(clippy::needless_range_loop)] // indexed loops mirror the formulas

use cumdev_core::Dataset;

pub struct Oracle<'a> {
    ds: &'a Dataset,
    uniform: bool,
    binary: bool,
}

impl<'a> Oracle<'a> {
    pub fn new(ds: &'a Dataset) -> Self {
        let uniform = ds.weights().windows(2).all(|w| w[0] == w[1]);
        let binary = ds.results().iter().all(|&r| r == 0.0 || r == 1.0);
        Self {
            ds,
            uniform,
            binary,
        }
    }

    pub fn n(&self) -> usize {
        self.ds.subpop().len()
    }

    /// Midpoints between consecutive subpopulation scores, with open ends.
    pub fn thresholds(&self) -> Vec<f64> {
        let sub = self.ds.subpop();
        let scores = self.ds.scores();
        let n = sub.len();
        (0..=n)
            .map(|k| {
                if k == 0 {
                    f64::NEG_INFINITY
                } else if k == n {
                    f64::INFINITY
                } else {
                    (scores[sub[k - 1]] + scores[sub[k]]) / 2.0
                }
            })
            .collect()
    }

    fn in_bin(&self, i: usize, k: usize, thresholds: &[f64]) -> bool {
        let s = self.ds.scores()[i];
        thresholds[k] < s && s <= thresholds[k + 1]
    }

    /// Average result of the full population in bin `k`.
    pub fn bin_mean(&self, k: usize, thresholds: &[f64]) -> f64 {
        let results = self.ds.results();
        let weights = self.ds.weights();
        if self.uniform {
            let mut sum = 0.0;
            let mut count = 0usize;
            for i in 0..self.ds.len() {
                if self.in_bin(i, k, thresholds) {
                    sum += results[i];
                    count += 1;
                }
            }
            sum / count as f64
        } else {
            let mut weighted = 0.0;
            let mut total = 0.0;
            for i in 0..self.ds.len() {
                if self.in_bin(i, k, thresholds) {
                    weighted += weights[i] * results[i];
                    total += weights[i];
                }
            }
            weighted / total
        }
    }

    /// Cumulative subpopulation average through rank `k` (1-based).
    pub fn sub_cumulative(&self, k: usize) -> f64 {
        let sub = self.ds.subpop();
        let results = self.ds.results();
        let weights = self.ds.weights();
        if self.uniform {
            let mut sum = 0.0;
            for j in 0..k {
                sum += results[sub[j]];
            }
            sum / sub.len() as f64
        } else {
            let mut sum = 0.0;
            for j in 0..k {
                sum += weights[sub[j]] * results[sub[j]];
            }
            let mut total = 0.0;
            for j in 0..sub.len() {
                total += weights[sub[j]];
            }
            sum / total
        }
    }

    /// Cumulative matched full-population average through rank `k`.
    pub fn full_cumulative(&self, k: usize, thresholds: &[f64]) -> f64 {
        let sub = self.ds.subpop();
        let weights = self.ds.weights();
        if self.uniform {
            let mut sum = 0.0;
            for j in 0..k {
                sum += self.bin_mean(j, thresholds);
            }
            sum / sub.len() as f64
        } else {
            let mut sum = 0.0;
            for j in 0..k {
                sum += weights[sub[j]] * self.bin_mean(j, thresholds);
            }
            let mut total = 0.0;
            for j in 0..sub.len() {
                total += weights[sub[j]];
            }
            sum / total
        }
    }

    /// Abscissa of rank `k` (1-based): rank fraction when uniform,
    /// cumulative weight fraction otherwise.
    pub fn abscissa(&self, k: usize) -> f64 {
        let sub = self.ds.subpop();
        if self.uniform {
            k as f64 / sub.len() as f64
        } else {
            let weights = self.ds.weights();
            let mut cum = 0.0;
            for j in 0..k {
                cum += weights[sub[j]];
            }
            let mut total = 0.0;
            for j in 0..sub.len() {
                total += weights[sub[j]];
            }
            cum / total
        }
    }

    fn bin_variance(&self, k: usize, thresholds: &[f64]) -> f64 {
        let mean = self.bin_mean(k, thresholds);
        let results = self.ds.results();
        let weights = self.ds.weights();
        if self.uniform {
            let mut sum = 0.0;
            let mut count = 0usize;
            for i in 0..self.ds.len() {
                if self.in_bin(i, k, thresholds) {
                    sum += (results[i] - mean) * (results[i] - mean);
                    count += 1;
                }
            }
            sum / count as f64
        } else {
            let mut weighted = 0.0;
            let mut total = 0.0;
            for i in 0..self.ds.len() {
                if self.in_bin(i, k, thresholds) {
                    weighted += weights[i] * (results[i] - mean) * (results[i] - mean);
                    total += weights[i];
                }
            }
            weighted / total
        }
    }

    /// Noise scale, selecting the Bernoulli form exactly when every result
    /// is 0 or 1 and the empirical-variance form otherwise; weighted data
    /// squares the member weights in the numerator.
    pub fn sigma(&self, thresholds: &[f64]) -> f64 {
        let sub = self.ds.subpop();
        let weights = self.ds.weights();
        let n = sub.len();
        let term = |k: usize| {
            if self.binary {
                let mean = self.bin_mean(k, thresholds);
                mean * (1.0 - mean)
            } else {
                self.bin_variance(k, thresholds)
            }
        };
        if self.uniform {
            let mut sum = 0.0;
            for k in 0..n {
                sum += term(k);
            }
            sum.sqrt() / n as f64
        } else {
            let mut numerator = 0.0;
            for k in 0..n {
                let w = weights[sub[k]];
                numerator += w * w * term(k);
            }
            let mut total = 0.0;
            for k in 0..n {
                total += weights[sub[k]];
            }
            numerator.sqrt() / total
        }
    }

    pub fn ordinates(&self) -> Vec<f64> {
        let thresholds = self.thresholds();
        (1..=self.n())
            .map(|k| self.sub_cumulative(k) - self.full_cumulative(k, &thresholds))
            .collect()
    }
}

pub fn ks(ordinates: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for &y in ordinates {
        if y.abs() > best {
            best = y.abs();
        }
    }
    best
}

pub fn kuiper(ordinates: &[f64]) -> f64 {
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for &y in ordinates {
        if y > hi {
            hi = y;
        }
        if y < lo {
            lo = y;
        }
    }
    hi - lo
}

/// Kuiper statistic with the cumulative sums started at `start`, built
/// literally from the shifted subpopulation and full-population sequences.
pub fn kuiper_shifted(oracle: &Oracle, start: usize) -> f64 {
    let thresholds = oracle.thresholds();
    let n = oracle.n();
    let shifted = |k: usize| -> f64 {
        let sub_part = if k >= start {
            oracle.sub_cumulative(k) - oracle.sub_cumulative(start)
        } else {
            -(oracle.sub_cumulative(start) - oracle.sub_cumulative(k))
        };
        let full_part = if k >= start {
            oracle.full_cumulative(k, &thresholds) - oracle.full_cumulative(start, &thresholds)
        } else {
            -(oracle.full_cumulative(start, &thresholds) - oracle.full_cumulative(k, &thresholds))
        };
        sub_part - full_part
    };
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for k in 0..=n {
        let v = shifted(k);
        if v > hi {
            hi = v;
        }
        if v < lo {
            lo = v;
        }
    }
    hi - lo
}

/// Per-bin weighted average `(score, value)` points for arbitrary interior
/// edges, scanning every observation per bin; empty bins are skipped.
pub fn binned_points(
    scores: &[f64],
    values: &[f64],
    weights: Option<&[f64]>,
    edges: &[f64],
) -> Vec<(f64, f64)> {
    let bins = edges.len() + 1;
    let lower = |k: usize| {
        if k == 0 {
            f64::NEG_INFINITY
        } else {
            edges[k - 1]
        }
    };
    let upper = |k: usize| {
        if k == bins - 1 {
            f64::INFINITY
        } else {
            edges[k]
        }
    };
    let mut points = Vec::new();
    for k in 0..bins {
        let mut score_sum = 0.0;
        let mut value_sum = 0.0;
        let mut mass = 0.0;
        let mut count = 0usize;
        for i in 0..scores.len() {
            if lower(k) < scores[i] && scores[i] <= upper(k) {
                match weights {
                    Some(w) => {
                        score_sum += w[i] * scores[i];
                        value_sum += w[i] * values[i];
                        mass += w[i];
                    }
                    None => {
                        score_sum += scores[i];
                        value_sum += values[i];
                    }
                }
                count += 1;
            }
        }
        if count == 0 {
            continue;
        }
        let denom = if weights.is_some() {
            mass
        } else {
            count as f64
        };
        points.push((score_sum / denom, value_sum / denom));
    }
    points
}

/// Cumulative response minus cumulative predicted probability, restarted
/// from scratch at every rank, plus the Bernoulli noise scale.
pub fn calibration_ordinates_and_sigma(probs: &[f64], outcomes: &[f64]) -> (Vec<f64>, f64) {
    let n = probs.len();
    let ordinates = (1..=n)
        .map(|k| {
            let mut response = 0.0;
            for j in 0..k {
                response += outcomes[j];
            }
            let mut predicted = 0.0;
            for j in 0..k {
                predicted += probs[j];
            }
            response / n as f64 - predicted / n as f64
        })
        .collect();
    let mut var = 0.0;
    for j in 0..n {
        var += probs[j] * (1.0 - probs[j]);
    }
    (ordinates, var.sqrt() / n as f64)
}
