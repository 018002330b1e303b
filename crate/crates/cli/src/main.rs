//! `cumdev`: cumulative-difference analysis of subpopulation deviation and
//! probabilistic calibration, from CSV files to statistics and SVG plots.

use clap::{Parser, Subcommand, ValueEnum};
use cumdev_cli::errors::{AppError, Result};
use cumdev_cli::io::{self, LoadOptions, WeightMode};
use cumdev_cli::screen;
use cumdev_core::{
    bootstrap_bands, calib_curve, calib_reliability, cumulative_curve_with, gen_calibration,
    gen_notch, gen_null, gen_smooth_oscillation, gen_step_oscillation, gen_weighted_outliers,
    reliability_diagram, render_cumulative, render_reliability, summary_stats, zoom_curve_with,
    BinKind, BinScheme, CalibKind, PlotSpec, SigmaMode, SummaryStats,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cumdev",
    version,
    about = "Cumulative-difference analysis of subpopulation deviation and calibration"
)]
struct Cli {
    /// RNG seed for tie-breaking, binning, generators, and bootstrap;
    /// falls back to $CUMDEV_SEED, then 0
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Whether to honor a `weight` column
    #[arg(long, global = true, value_enum, default_value_t = WeightedArg::Auto)]
    weighted: WeightedArg,

    /// Noise-scale formula: Bernoulli for 0/1 results, empirical variance
    /// otherwise
    #[arg(long, global = true, value_enum, default_value_t = BinaryArg::Auto)]
    binary: BinaryArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightedArg {
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum BinaryArg {
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Equispaced,
    EqualCount,
    EqualNorm,
}

impl From<SchemeArg> for BinKind {
    fn from(arg: SchemeArg) -> Self {
        match arg {
            SchemeArg::Equispaced => BinKind::EquispacedScores,
            SchemeArg::EqualCount => BinKind::EqualCount,
            SchemeArg::EqualNorm => BinKind::EqualNormRatio,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorArg {
    Notch,
    SmoothOscillation,
    StepOscillation,
    WeightedOutliers,
    CalibrationLinear,
    CalibrationOverconfidentNotch,
    CalibrationComplex,
    Null,
}

#[derive(Subcommand)]
enum Command {
    /// Print deviation statistics (G, D, sigma, and normalized forms)
    Stats {
        csv: PathBuf,
        /// Define the subpopulation as rows where COLUMN=VALUE
        #[arg(long, value_name = "COLUMN=VALUE")]
        subpop_where: Option<String>,
    },
    /// Render the cumulative-difference curve as SVG
    Plot {
        csv: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Restrict the plot to scores in LO:HI, rescaling sigma to the
        /// restricted domain
        #[arg(long, value_name = "LO:HI")]
        zoom: Option<String>,
        #[arg(long, default_value = "")]
        title: String,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 480)]
        height: u32,
        #[arg(long, value_name = "COLUMN=VALUE")]
        subpop_where: Option<String>,
    },
    /// Render a classical binned reliability diagram as SVG
    Reliability {
        csv: PathBuf,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        bins: usize,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value = "")]
        title: String,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 480)]
        height: u32,
        #[arg(long, value_name = "COLUMN=VALUE")]
        subpop_where: Option<String>,
    },
    /// Assess calibration of predicted probabilities against outcomes
    Calibrate {
        csv: PathBuf,
        /// Bootstrap replicates drawn for the confidence bands (0 disables)
        #[arg(long, default_value_t = 20)]
        bootstrap: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::EqualCount)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        /// Render the cumulative calibration curve instead of the binned
        /// reliability diagram
        #[arg(long)]
        cumulative: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "")]
        title: String,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 480)]
        height: u32,
    },
    /// Generate a synthetic dataset with known ground truth
    Synth {
        #[arg(value_enum)]
        generator: GeneratorArg,
        #[arg(short, long)]
        output: PathBuf,
        /// Observation count for the calibration generators
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Summarize every dataset in a manifest, ranked by D/sigma
    Screen {
        /// Text file with one CSV path per line
        manifest: PathBuf,
        /// Flag rows whose D/sigma exceeds this cutoff
        #[arg(long, default_value_t = 1.25)]
        threshold: f64,
        #[arg(long, value_name = "COLUMN=VALUE")]
        subpop_where: Option<String>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                std::process::exit(0);
            }
            eprint!("{err}");
            std::process::exit(1);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = resolve_seed(cli.seed)?;
    let weights = match cli.weighted {
        WeightedArg::Auto => WeightMode::Auto,
        WeightedArg::On => WeightMode::On,
        WeightedArg::Off => WeightMode::Off,
    };
    let sigma_mode = match cli.binary {
        BinaryArg::Auto => SigmaMode::Auto,
        BinaryArg::On => SigmaMode::Bernoulli,
        BinaryArg::Off => SigmaMode::Empirical,
    };

    match cli.command {
        Command::Stats { csv, subpop_where } => {
            let options = load_options(seed, weights, subpop_where)?;
            let dataset = io::load_dataset(&csv, &options)?;
            let curve = cumulative_curve_with(&dataset, sigma_mode);
            print_stats(&summary_stats(&curve));
            Ok(())
        }
        Command::Plot {
            csv,
            output,
            zoom,
            title,
            width,
            height,
            subpop_where,
        } => {
            check_dimensions(width, height)?;
            let options = load_options(seed, weights, subpop_where)?;
            let dataset = io::load_dataset(&csv, &options)?;
            let zoom = zoom.map(|z| parse_zoom(&z)).transpose()?;
            let curve = match zoom {
                Some((lo, hi)) => zoom_curve_with(&dataset, lo, hi, sigma_mode)?,
                None => cumulative_curve_with(&dataset, sigma_mode),
            };
            let spec = PlotSpec {
                width,
                height,
                title,
                zoom,
                ..PlotSpec::default()
            };
            std::fs::write(&output, render_cumulative(&curve, &spec))?;
            Ok(())
        }
        Command::Reliability {
            csv,
            scheme,
            bins,
            output,
            title,
            width,
            height,
            subpop_where,
        } => {
            check_dimensions(width, height)?;
            let options = load_options(seed, weights, subpop_where)?;
            let dataset = io::load_dataset(&csv, &options)?;
            let scheme = BinScheme::new(scheme.into(), bins, seed)?;
            let diagram = reliability_diagram(&dataset, &scheme, &scheme)?;
            let spec = PlotSpec {
                width,
                height,
                title,
                y_label: "mean result".to_string(),
                ..PlotSpec::default()
            };
            std::fs::write(&output, render_reliability(&diagram, None, &spec))?;
            Ok(())
        }
        Command::Calibrate {
            csv,
            bootstrap,
            scheme,
            bins,
            cumulative,
            output,
            title,
            width,
            height,
        } => {
            check_dimensions(width, height)?;
            let data = io::load_calibration(&csv, seed)?;
            let curve = calib_curve(&data);
            print_stats(&summary_stats(&curve));
            if let Some(output) = output {
                let svg = if cumulative {
                    let spec = PlotSpec {
                        width,
                        height,
                        title,
                        x_label: "predicted probability".to_string(),
                        y_label: "cumulative miscalibration".to_string(),
                        ..PlotSpec::default()
                    };
                    render_cumulative(&curve, &spec)
                } else {
                    let scheme = BinScheme::new(scheme.into(), bins, seed)?;
                    let diagram = calib_reliability(&data, &scheme)?;
                    let bands = if bootstrap == 0 {
                        None
                    } else {
                        Some(bootstrap_bands(&data, &scheme, bootstrap, seed)?)
                    };
                    let spec = PlotSpec {
                        width,
                        height,
                        title,
                        x_label: "predicted probability".to_string(),
                        y_label: "observed frequency".to_string(),
                        ..PlotSpec::default()
                    };
                    render_reliability(&diagram, bands.as_deref(), &spec)
                };
                std::fs::write(&output, svg)?;
            }
            Ok(())
        }
        Command::Synth {
            generator,
            output,
            count,
        } => {
            match generator {
                GeneratorArg::Notch => io::write_dataset_csv(&output, &gen_notch(seed).dataset)?,
                GeneratorArg::SmoothOscillation => {
                    io::write_dataset_csv(&output, &gen_smooth_oscillation(seed).dataset)?
                }
                GeneratorArg::StepOscillation => {
                    io::write_dataset_csv(&output, &gen_step_oscillation(seed).dataset)?
                }
                GeneratorArg::WeightedOutliers => {
                    io::write_dataset_csv(&output, &gen_weighted_outliers(seed).dataset)?
                }
                GeneratorArg::CalibrationLinear => io::write_calibration_csv(
                    &output,
                    &gen_calibration(CalibKind::Linear, count, seed)?.data,
                )?,
                GeneratorArg::CalibrationOverconfidentNotch => io::write_calibration_csv(
                    &output,
                    &gen_calibration(CalibKind::OverconfidentNotch, count, seed)?.data,
                )?,
                GeneratorArg::CalibrationComplex => io::write_calibration_csv(
                    &output,
                    &gen_calibration(CalibKind::Complex, count, seed)?.data,
                )?,
                GeneratorArg::Null => {
                    io::write_calibration_csv(&output, &gen_null(count, seed)?.data)?
                }
            }
            println!("wrote {}", output.display());
            Ok(())
        }
        Command::Screen {
            manifest,
            threshold,
            subpop_where,
        } => {
            let options = load_options(seed, weights, subpop_where)?;
            let rows = screen::run_screen(&manifest, &options, sigma_mode, threshold)?;
            print_screen_report(&rows);
            Ok(())
        }
    }
}

fn resolve_seed(explicit: Option<u64>) -> Result<u64> {
    if let Some(seed) = explicit {
        return Ok(seed);
    }
    match std::env::var("CUMDEV_SEED") {
        Ok(raw) => raw.parse().map_err(|_| {
            AppError::Usage(format!(
                "CUMDEV_SEED must be an unsigned integer, got '{raw}'"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn load_options(
    seed: u64,
    weights: WeightMode,
    subpop_where: Option<String>,
) -> Result<LoadOptions> {
    let subpop_where = subpop_where
        .map(|raw| {
            raw.split_once('=')
                .map(|(column, value)| (column.to_string(), value.to_string()))
                .ok_or_else(|| {
                    AppError::Usage(format!("--subpop-where expects COLUMN=VALUE, got '{raw}'"))
                })
        })
        .transpose()?;
    Ok(LoadOptions {
        seed,
        weights,
        subpop_where,
    })
}

fn check_dimensions(width: u32, height: u32) -> Result<()> {
    if width < 160 || height < 160 {
        return Err(AppError::Usage(format!(
            "plot dimensions must be at least 160x160, got {width}x{height}"
        )));
    }
    Ok(())
}

fn parse_zoom(raw: &str) -> Result<(f64, f64)> {
    let usage = || AppError::Usage(format!("--zoom expects LO:HI with LO <= HI, got '{raw}'"));
    let (lo, hi) = raw.split_once(':').ok_or_else(usage)?;
    let lo: f64 = lo.parse().map_err(|_| usage())?;
    let hi: f64 = hi.parse().map_err(|_| usage())?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(usage());
    }
    Ok((lo, hi))
}

fn print_stats(stats: &SummaryStats) {
    let fmt_norm = |v: Option<f64>| match v {
        Some(v) => format!("{v:.6}"),
        None => "undefined".to_string(),
    };
    println!("{:<24} value", "statistic");
    println!("{:<24} {:.6}", "G (Kolmogorov-Smirnov)", stats.g);
    println!("{:<24} {:.6}", "D (Kuiper)", stats.d);
    println!("{:<24} {:.6}", "sigma", stats.sigma);
    println!("{:<24} {}", "G/sigma", fmt_norm(stats.g_normalized));
    println!("{:<24} {}", "D/sigma", fmt_norm(stats.d_normalized));
    println!("{:<24} {}", "n", stats.n);
    println!();
    println!("g={}", stats.g);
    println!("d={}", stats.d);
    println!("sigma={}", stats.sigma);
    println!("g_normalized={}", machine_norm(stats.g_normalized));
    println!("d_normalized={}", machine_norm(stats.d_normalized));
    println!("n={}", stats.n);
}

fn machine_norm(v: Option<f64>) -> String {
    match v {
        Some(v) => v.to_string(),
        None => "undefined".to_string(),
    }
}

fn print_screen_report(rows: &[screen::ScreenRow]) {
    println!(
        "{:<4} {:>12} {:>12} {:>12} {:>6}  path",
        "flag", "D/sigma", "G/sigma", "sigma", "n"
    );
    for row in rows {
        match &row.outcome {
            Ok(screen) => {
                let s = &screen.stats;
                let fmt_norm = |v: Option<f64>| match v {
                    Some(v) => format!("{v:.4}"),
                    None => "undef".to_string(),
                };
                println!(
                    "{:<4} {:>12} {:>12} {:>12.6} {:>6}  {}",
                    if screen.flagged { "*" } else { "" },
                    fmt_norm(s.d_normalized),
                    fmt_norm(s.g_normalized),
                    s.sigma,
                    s.n,
                    row.path
                );
            }
            Err(message) => {
                println!(
                    "{:<4} {:>12} {:>12} {:>12} {:>6}  {}",
                    "!", "-", "-", "-", "-", row.path
                );
                println!("     error: {message}");
            }
        }
    }
    println!();
    for row in rows {
        match &row.outcome {
            Ok(screen) => {
                let s = &screen.stats;
                println!(
                    "path={} n={} g={} d={} sigma={} g_normalized={} d_normalized={} flag={}",
                    row.path,
                    s.n,
                    s.g,
                    s.d,
                    s.sigma,
                    machine_norm(s.g_normalized),
                    machine_norm(s.d_normalized),
                    u8::from(screen.flagged)
                );
            }
            Err(message) => println!("path={} error={message}", row.path),
        }
    }
}
