//! `decompose` and `mask`: scaffold topology of a single ligand.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sbdd_core::molio::{read_ligand, write_ligand, MolecularGraph};
use sbdd_core::scaffold::{
    decompose, make_mask, sample_mask, valid_tasks, Decomposition, MaskAssignment, Task,
};

use crate::output::{emit, json, Provenance};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Ligand SDF file; the first record is used.
    #[arg(long)]
    pub ligand: PathBuf,
    /// Also write scaffold.sdf and sidechain.sdf (heavy atoms) here.
    #[arg(long)]
    pub fragments_dir: Option<PathBuf>,
    /// JSON output path; stdout by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskChoice {
    #[value(name = "SH")]
    Sh,
    #[value(name = "SC")]
    Sc,
    #[value(name = "DN")]
    Dn,
    /// Uniform over the tasks valid for this ligand, driven by `--seed`.
    #[value(name = "random")]
    Random,
}

#[derive(Debug, Args)]
pub struct MaskArgs {
    /// Ligand SDF file; the first record is used.
    #[arg(long)]
    pub ligand: PathBuf,
    #[arg(long, value_enum)]
    pub task: TaskChoice,
    /// Context-only ligand (target atoms removed) as SDF.
    #[arg(long)]
    pub context_sdf: Option<PathBuf>,
    /// JSON output path; stdout by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct LigandConfig {
    ligand: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    task: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct DecomposeReport {
    provenance: Provenance<LigandConfig>,
    name: String,
    heavy_atoms: usize,
    #[serde(flatten)]
    decomposition: Decomposition,
    valid_tasks: Vec<Task>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    fragments: Vec<PathBuf>,
}

#[derive(Serialize)]
struct MaskReport {
    provenance: Provenance<LigandConfig>,
    task: Task,
    target: Vec<usize>,
    context: Vec<usize>,
    ring_systems: Vec<Vec<usize>>,
}

fn fragment(graph: &MolecularGraph, atoms: &[usize], name: &str) -> String {
    let (sub, _) = graph.induced_subgraph(atoms);
    write_ligand(&sub, None, &[("FRAGMENT".into(), name.into())])
}

pub fn run_decompose(args: DecomposeArgs) -> Result<Outcome> {
    let g =
        read_ligand(&args.ligand).with_context(|| format!("ligand {}", args.ligand.display()))?;
    let d = decompose(&g);
    let mut fragments = Vec::new();
    if let Some(dir) = &args.fragments_dir {
        for (name, atoms) in [("scaffold", &d.scaffold), ("sidechain", &d.sidechain)] {
            if atoms.is_empty() {
                continue;
            }
            let path = dir.join(format!("{name}.sdf"));
            emit(Some(&path), &fragment(&g, atoms, name))?;
            fragments.push(path);
        }
    }
    let report = DecomposeReport {
        provenance: Provenance::new(
            "decompose",
            LigandConfig {
                ligand: args.ligand,
                task: None,
                seed: None,
            },
        ),
        name: g.name().to_string(),
        heavy_atoms: g.heavy_count(),
        valid_tasks: valid_tasks(&d),
        decomposition: d,
        fragments,
    };
    emit(args.out.as_deref(), &json(&report)?)?;
    Ok(Outcome::default())
}

pub fn run_mask(args: MaskArgs, seed: u64) -> Result<Outcome> {
    let g =
        read_ligand(&args.ligand).with_context(|| format!("ligand {}", args.ligand.display()))?;
    let d = decompose(&g);
    let (mask, label, seed_used): (MaskAssignment, &'static str, Option<u64>) = match args.task {
        TaskChoice::Sh => (make_mask(&d, Task::ScaffoldHopping)?, "SH", None),
        TaskChoice::Sc => (make_mask(&d, Task::SideChainDecoration)?, "SC", None),
        TaskChoice::Dn => (make_mask(&d, Task::DeNovo)?, "DN", None),
        TaskChoice::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (sample_mask(&d, &mut rng)?, "random", Some(seed))
        }
    };
    if let Some(path) = &args.context_sdf {
        emit(Some(path), &fragment(&g, &mask.context, "context"))?;
    }
    let report = MaskReport {
        provenance: Provenance::new(
            "mask",
            LigandConfig {
                ligand: args.ligand,
                task: Some(label),
                seed: seed_used,
            },
        ),
        task: mask.task,
        target: mask.target,
        context: mask.context,
        ring_systems: d.ring_systems,
    };
    emit(args.out.as_deref(), &json(&report)?)?;
    Ok(Outcome::default())
}
