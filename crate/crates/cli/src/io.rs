//! CSV ingestion and emission.
//!
//! Input files carry a header row with columns `score,result[,weight][,subpop]`
//! (calibration files just `score,result`). Loading validates every cell with
//! its line number, drops zero-weight rows, and breaks tied scores with a
//! seeded relative perturbation of about one part in 1e8 so the numerical
//! kernel always sees strictly increasing scores. Loading is deterministic
//! given the file bytes and the seed.

use crate::errors::{AppError, Result};
use cumdev_core::{CalibrationData, Dataset};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::Path;

/// How to treat a `weight` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Use the column when present.
    Auto,
    /// Require the column.
    On,
    /// Ignore the column entirely.
    Off,
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub seed: u64,
    pub weights: WeightMode,
    /// `(column, value)`: rows whose `column` equals `value` form the
    /// subpopulation, overriding any `subpop` column.
    pub subpop_where: Option<(String, String)>,
}

struct Row {
    score: f64,
    result: f64,
    weight: f64,
    member: bool,
}

/// Loads a scored dataset with a subpopulation. Zero-weight rows are
/// dropped, negative weights are an error, and tied scores are perturbed
/// apart deterministically.
pub fn load_dataset(path: &Path, options: &LoadOptions) -> Result<Dataset> {
    let mut rows = read_rows(path, options)?;
    if rows.is_empty() {
        return Err(AppError::Data(format!(
            "{}: no usable data rows",
            path.display()
        )));
    }
    if !rows.iter().any(|r| r.member) {
        return Err(AppError::Data(format!(
            "{}: subpopulation is empty",
            path.display()
        )));
    }
    sort_breaking_ties(&mut rows, options.seed, false);
    let scores: Vec<f64> = rows.iter().map(|r| r.score).collect();
    let results: Vec<f64> = rows.iter().map(|r| r.result).collect();
    let weights: Vec<f64> = rows.iter().map(|r| r.weight).collect();
    let subpop: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.member.then_some(i))
        .collect();
    Ok(Dataset::new(scores, results, Some(weights), subpop)?)
}

/// Loads calibration data: predicted probabilities in `score`, binary
/// outcomes in `result`. Tied predictions are perturbed apart, reflecting
/// at the [0, 1] boundary.
pub fn load_calibration(path: &Path, seed: u64) -> Result<CalibrationData> {
    let mut reader = open(path)?;
    let headers = reader.headers().map_err(AppError::from)?.clone();
    let score_col = require_column(&headers, "score", path)?;
    let result_col = require_column(&headers, "result", path)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(AppError::from)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let score = parse_cell(&record, score_col, line, "score")?;
        if !(0.0..=1.0).contains(&score) {
            return Err(AppError::Data(format!(
                "line {line}, column 'score': probability {score} outside [0, 1]"
            )));
        }
        let result = parse_cell(&record, result_col, line, "result")?;
        if result != 0.0 && result != 1.0 {
            return Err(AppError::Data(format!(
                "line {line}, column 'result': outcome {result} is not 0 or 1"
            )));
        }
        rows.push(Row {
            score,
            result,
            weight: 1.0,
            member: false,
        });
    }
    if rows.is_empty() {
        return Err(AppError::Data(format!(
            "{}: no usable data rows",
            path.display()
        )));
    }
    sort_breaking_ties(&mut rows, seed, true);
    let probs: Vec<f64> = rows.iter().map(|r| r.score).collect();
    let outcomes: Vec<f64> = rows.iter().map(|r| r.result).collect();
    Ok(CalibrationData::new(probs, outcomes)?)
}

fn open(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| AppError::Data(format!("{}: {e}", path.display())))
}

fn require_column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers.iter().position(|h| h == name).ok_or_else(|| {
        AppError::Data(format!(
            "{}: missing required column '{name}'",
            path.display()
        ))
    })
}

fn parse_cell(record: &csv::StringRecord, col: usize, line: u64, name: &str) -> Result<f64> {
    let raw = record
        .get(col)
        .ok_or_else(|| AppError::Data(format!("line {line}: missing field for column '{name}'")))?;
    let value: f64 = raw.parse().map_err(|_| {
        AppError::Data(format!(
            "line {line}, column '{name}': invalid numeric value '{raw}'"
        ))
    })?;
    if !value.is_finite() {
        return Err(AppError::Data(format!(
            "line {line}, column '{name}': non-finite value '{raw}'"
        )));
    }
    Ok(value)
}

fn parse_flag(record: &csv::StringRecord, col: usize, line: u64, name: &str) -> Result<bool> {
    let raw = record
        .get(col)
        .ok_or_else(|| AppError::Data(format!("line {line}: missing field for column '{name}'")))?;
    match raw.to_ascii_lowercase().as_str() {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        _ => Err(AppError::Data(format!(
            "line {line}, column '{name}': expected 0/1/true/false, got '{raw}'"
        ))),
    }
}

fn read_rows(path: &Path, options: &LoadOptions) -> Result<Vec<Row>> {
    let mut reader = open(path)?;
    let headers = reader.headers().map_err(AppError::from)?.clone();
    let score_col = require_column(&headers, "score", path)?;
    let result_col = require_column(&headers, "result", path)?;
    let weight_col = match options.weights {
        WeightMode::Off => None,
        WeightMode::Auto => headers.iter().position(|h| h == "weight"),
        WeightMode::On => Some(require_column(&headers, "weight", path)?),
    };
    let subpop_col = headers.iter().position(|h| h == "subpop");
    let where_col = match &options.subpop_where {
        Some((column, _)) => Some(require_column(&headers, column, path)?),
        None => None,
    };
    if subpop_col.is_none() && where_col.is_none() {
        return Err(AppError::Data(format!(
            "{}: no subpopulation defined; add a 'subpop' column or pass --subpop-where",
            path.display()
        )));
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(AppError::from)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let score = parse_cell(&record, score_col, line, "score")?;
        let result = parse_cell(&record, result_col, line, "result")?;
        let weight = match weight_col {
            Some(col) => {
                let w = parse_cell(&record, col, line, "weight")?;
                if w < 0.0 {
                    return Err(AppError::Data(format!(
                        "line {line}, column 'weight': negative weight {w}"
                    )));
                }
                if w == 0.0 {
                    continue; // zero-weight records carry no information
                }
                w
            }
            None => 1.0,
        };
        let member = match (&options.subpop_where, where_col) {
            (Some((_, value)), Some(col)) => {
                let raw = record.get(col).ok_or_else(|| {
                    AppError::Data(format!("line {line}: missing field for filter column"))
                })?;
                raw == value
            }
            _ => parse_flag(&record, subpop_col.expect("checked above"), line, "subpop")?,
        };
        rows.push(Row {
            score,
            result,
            weight,
            member,
        });
    }
    Ok(rows)
}

/// Stable-sorts rows by score, then perturbs any tied scores by about one
/// part in 1e8 (absolute 1e-8 at zero) and re-sorts until all scores are
/// distinct. Perturbations draw from stream 2 of the seeded generator;
/// `fold_unit` reflects values back into [0, 1] for probability scores.
fn sort_breaking_ties(rows: &mut [Row], seed: u64, fold_unit: bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    loop {
        rows.sort_by(|a, b| {
            a.score
                .partial_cmp(&b.score)
                .expect("scores validated finite")
        });
        let mut tied = false;
        let mut i = 0;
        while i < rows.len() {
            let mut j = i + 1;
            while j < rows.len() && rows[j].score == rows[i].score {
                j += 1;
            }
            if j - i > 1 {
                tied = true;
                for row in &mut rows[i..j] {
                    row.score = perturb(row.score, &mut rng, fold_unit);
                }
            }
            i = j;
        }
        if !tied {
            return;
        }
    }
}

fn perturb(score: f64, rng: &mut ChaCha8Rng, fold_unit: bool) -> f64 {
    let draw: f64 = rng.random();
    let offset = (2.0 * draw - 1.0)
        * if score == 0.0 {
            1e-8
        } else {
            score.abs() * 1e-8
        };
    let mut perturbed = score + offset;
    if fold_unit {
        if perturbed > 1.0 {
            perturbed = score - offset;
        }
        if perturbed < 0.0 {
            perturbed = score - offset;
        }
    }
    perturbed
}

/// Writes a dataset as `score,result,weight,subpop` with full-precision
/// round-trip formatting.
pub fn write_dataset_csv(path: &Path, dataset: &Dataset) -> Result<()> {
    let mut body = String::with_capacity(dataset.len() * 32);
    body.push_str("score,result,weight,subpop\n");
    let mut members = dataset.subpop().iter().peekable();
    for i in 0..dataset.len() {
        let member = members.peek() == Some(&&i);
        if member {
            members.next();
        }
        let _ = writeln!(
            body,
            "{},{},{},{}",
            dataset.scores()[i],
            dataset.results()[i],
            dataset.weights()[i],
            u8::from(member)
        );
    }
    std::fs::write(path, body)?;
    Ok(())
}

/// Writes calibration data as `score,result`.
pub fn write_calibration_csv(path: &Path, data: &CalibrationData) -> Result<()> {
    let mut body = String::with_capacity(data.len() * 24);
    body.push_str("score,result\n");
    for (&p, &r) in data.probs().iter().zip(data.outcomes()) {
        let _ = writeln!(body, "{p},{r}");
    }
    std::fs::write(path, body)?;
    Ok(())
}
