//! `gsnr` and `schedule`: audit tables for training-time quantities.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use sbdd_core::diffsched::{ScheduleKind, VarianceSchedule, DEFAULT_STEPS};
use sbdd_core::ibstats::gradient_snr;

use crate::config::{self, pick, FileConfig};
use crate::output::{csv_text, emit, Provenance};
use crate::{Outcome, UsageError};

#[derive(Debug, Args)]
pub struct GsnrArgs {
    /// CSV with one flattened gradient vector per row, no header; `#` lines
    /// are ignored.
    #[arg(long)]
    pub input: PathBuf,
    /// Gradients per non-overlapping window.
    #[arg(long)]
    pub window: Option<usize>,
    /// Windows per rolling-variance span.
    #[arg(long)]
    pub rolling: Option<usize>,
    /// CSV output path; stdout by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct GsnrConfig {
    input: PathBuf,
    window: usize,
    rolling: usize,
}

#[derive(Debug, Serialize)]
struct GsnrRow {
    window: usize,
    start: usize,
    len: usize,
    snr: f64,
    capped: bool,
    rolling_variance: Option<f64>,
}

pub fn run_gsnr(args: GsnrArgs, file: &FileConfig) -> Result<Outcome> {
    let cfg = GsnrConfig {
        window: config::at_least("window", pick(args.window, file.gsnr.window, 32), 2)?,
        rolling: config::at_least("rolling", pick(args.rolling, file.gsnr.rolling, 5), 1)?,
        input: args.input,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(&cfg.input)
        .with_context(|| format!("reading {}", cfg.input.display()))?;
    let mut samples: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("{} row {}: not a number", cfg.input.display(), i + 1))?;
        samples.push(row);
    }
    if samples.len() < cfg.window {
        bail!(UsageError(format!(
            "{} holds {} gradients, fewer than one window of {}",
            cfg.input.display(),
            samples.len(),
            cfg.window
        )));
    }
    let report = gradient_snr(&samples, cfg.window, cfg.rolling)?;
    let rows: Vec<GsnrRow> = report
        .windows
        .iter()
        .enumerate()
        .map(|(i, w)| GsnrRow {
            window: i,
            start: w.start,
            len: w.len,
            snr: w.snr,
            capped: w.capped,
            rolling_variance: (i + 1)
                .checked_sub(cfg.rolling)
                .map(|k| report.rolling_variance[k]),
        })
        .collect();
    let out = args.out;
    emit(
        out.as_deref(),
        &csv_text(&Provenance::new("gsnr", cfg), &rows)?,
    )?;
    Ok(Outcome::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindChoice {
    Sigmoid,
    Linear,
    Cosine,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Schedule family; sigmoid by default.
    #[arg(long, value_enum)]
    pub kind: Option<KindChoice>,
    /// Number of diffusion steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// First β (sigmoid and linear).
    #[arg(long)]
    pub beta_start: Option<f64>,
    /// Last β (sigmoid and linear).
    #[arg(long)]
    pub beta_end: Option<f64>,
    /// Offset of the cosine schedule.
    #[arg(long)]
    pub offset: Option<f64>,
    /// CSV output path; stdout by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ScheduleConfig {
    steps: usize,
    kind: ScheduleKind,
}

fn resolve_kind(args: &ScheduleArgs, file: Option<ScheduleKind>) -> ScheduleKind {
    let base = file.unwrap_or_default();
    let (start, end) = match base {
        ScheduleKind::Linear {
            beta_start,
            beta_end,
        }
        | ScheduleKind::Sigmoid {
            beta_start,
            beta_end,
        } => (beta_start, beta_end),
        ScheduleKind::Cosine { .. } => match ScheduleKind::default() {
            ScheduleKind::Sigmoid {
                beta_start,
                beta_end,
            } => (beta_start, beta_end),
            _ => unreachable!("default schedule is sigmoid"),
        },
    };
    let beta_start = args.beta_start.unwrap_or(start);
    let beta_end = args.beta_end.unwrap_or(end);
    let s = match base {
        ScheduleKind::Cosine { s } => s,
        _ => 0.008,
    };
    match args.kind {
        None => match base {
            ScheduleKind::Cosine { .. } => ScheduleKind::Cosine {
                s: args.offset.unwrap_or(s),
            },
            ScheduleKind::Linear { .. } => ScheduleKind::Linear {
                beta_start,
                beta_end,
            },
            ScheduleKind::Sigmoid { .. } => ScheduleKind::Sigmoid {
                beta_start,
                beta_end,
            },
        },
        Some(KindChoice::Sigmoid) => ScheduleKind::Sigmoid {
            beta_start,
            beta_end,
        },
        Some(KindChoice::Linear) => ScheduleKind::Linear {
            beta_start,
            beta_end,
        },
        Some(KindChoice::Cosine) => ScheduleKind::Cosine {
            s: args.offset.unwrap_or(s),
        },
    }
}

pub fn run_schedule(args: ScheduleArgs, file: &FileConfig) -> Result<Outcome> {
    let steps = config::at_least(
        "steps",
        pick(args.steps, file.schedule.steps, DEFAULT_STEPS),
        1,
    )?;
    let kind = resolve_kind(&args, file.schedule.kind);
    let schedule = VarianceSchedule::new(steps, kind).map_err(|e| UsageError(e.to_string()))?;
    let prov = Provenance::new("schedule", ScheduleConfig { steps, kind });
    emit(args.out.as_deref(), &csv_text(&prov, &schedule.table())?)?;
    Ok(Outcome::default())
}
