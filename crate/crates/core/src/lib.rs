//! Cumulative-difference analysis of how a subpopulation's outcomes deviate
//! from the full population's as a function of a real-valued score, plus
//! cumulative assessment of probabilistic calibration.
//!
//! The central object is the cumulative-difference curve: deviation over a
//! score range is the slope of the curve's secant line over that range, so
//! nothing is lost to coarse binning. Kolmogorov-Smirnov and Kuiper
//! statistics summarize each curve, and a noise scale `sigma` calibrates
//! both against the fluctuations a driftless random walk would show.
//! Classical binned reliability diagrams are included for comparison, along
//! with seeded synthetic generators with exactly known ground truth and a
//! deterministic SVG renderer.

pub mod binning;
pub mod calibration;
pub mod curve;
pub mod dataset;
pub mod error;
pub mod plot;
pub mod synth;

pub use binning::{bin_edges, reliability_diagram, BinKind, BinScheme, ReliabilityDiagram};
pub use calibration::{
    bootstrap_bands, calib_curve, calib_reliability, calib_stats, CalibrationData,
};
pub use curve::{
    binned_full_means, cumulative_curve, cumulative_curve_with, kolmogorov_smirnov, kuiper,
    midpoint_bins, restrict_curve, restrict_curve_with, sigma_scale, sigma_scale_with,
    summary_stats, zoom_curve, zoom_curve_with, CumulativeCurve, SigmaMode, SummaryStats,
};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use plot::{render_cumulative, render_reliability, PlotSpec};
pub use synth::{
    expected_curve, gen_calibration, gen_notch, gen_null, gen_smooth_oscillation,
    gen_step_oscillation, gen_weighted_outliers, CalibKind, CalibrationTruth, GroundTruth,
};
