use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use sbdd_core::energy::{EnergyBreakdown, EnergyModel, ScoringLigand, ScoringPocket};

use crate::config::{self, FileConfig};
use crate::inputs::load_complex;
use crate::output::{emit, json, Provenance};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Receptor PDB file.
    #[arg(long)]
    pub receptor: PathBuf,
    /// Ligand SDF file; the first record is used.
    #[arg(long)]
    pub ligand: PathBuf,
    /// Five term weights (g1, g2, rep, hyd, hd), comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Option<Vec<f64>>,
    /// Keep only receptor atoms within this radius (Å) of the ligand centroid.
    #[arg(long)]
    pub clip_radius: Option<f64>,
    /// JSON output path; stdout by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BreakdownJson {
    pub g1: f64,
    pub g2: f64,
    pub rep: f64,
    pub hyd: f64,
    pub hd: f64,
    pub weights: [f64; 5],
    pub total: f64,
    pub pair_count: usize,
}

impl From<&EnergyBreakdown> for BreakdownJson {
    fn from(b: &EnergyBreakdown) -> Self {
        BreakdownJson {
            g1: b.e_g1,
            g2: b.e_g2,
            rep: b.e_rep,
            hyd: b.e_hyd,
            hd: b.e_hd,
            weights: b.weights,
            total: b.total,
            pair_count: b.pair_count,
        }
    }
}

#[derive(Debug, Serialize)]
struct ScoreConfig {
    receptor: PathBuf,
    ligand: PathBuf,
    weights: [f64; 5],
    clip_radius: Option<f64>,
}

#[derive(Serialize)]
struct ScoreReport {
    provenance: Provenance<ScoreConfig>,
    #[serde(flatten)]
    breakdown: BreakdownJson,
    unknown_receptor_templates: usize,
}

pub fn run(args: ScoreArgs, file: &FileConfig) -> Result<Outcome> {
    let weights = config::weights(args.weights, file.energy.weights)?;
    let clip_radius = args.clip_radius.or(file.energy.clip_radius);
    if let Some(r) = clip_radius {
        config::positive("clip radius", r)?;
    }
    let (pocket, lig) = load_complex(&args.receptor, &args.ligand, clip_radius)?;
    let sp = ScoringPocket::new(&pocket)?;
    let sl = ScoringLigand::new(&lig)?;
    let breakdown = EnergyModel { weights }.evaluate(&sp, &sl, &sl.identity_pose());
    let report = ScoreReport {
        provenance: Provenance::new(
            "score",
            ScoreConfig {
                receptor: args.receptor,
                ligand: args.ligand,
                weights,
                clip_radius,
            },
        ),
        breakdown: (&breakdown).into(),
        unknown_receptor_templates: sp.typing_report().unknown_templates,
    };
    emit(args.out.as_deref(), &json(&report)?)?;
    Ok(Outcome::default())
}
