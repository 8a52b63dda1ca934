use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::Args;
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use sbdd_core::energy::{EnergyModel, ScoringLigand, ScoringPocket};
use sbdd_core::molio::write_ligand;
use sbdd_core::refine::{
    lbfgs_refine, DiffScheme, LbfgsParams, RefineResult, RigidPose, TraceEntry,
};

use crate::config::{self, pick, FileConfig};
use crate::inputs::load_complex;
use crate::output::{
    csv_text, emit, job_stem, json, read_manifest, thread_pool, ManifestEntry, Provenance,
};
use crate::score::BreakdownJson;
use crate::{Outcome, UsageError};

#[derive(Debug, Args)]
pub struct RefineArgs {
    /// Receptor PDB file.
    #[arg(long, requires = "ligand", conflicts_with = "manifest")]
    pub receptor: Option<PathBuf>,
    /// Ligand SDF file; the first record is used.
    #[arg(long, requires = "receptor", conflicts_with = "manifest")]
    pub ligand: Option<PathBuf>,
    /// Tab-separated receptor/ligand pairs, one job per line.
    #[arg(long, required_unless_present = "receptor")]
    pub manifest: Option<PathBuf>,
    /// Iteration budget.
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Fixed multiplier on the L-BFGS direction.
    #[arg(long)]
    pub step: Option<f64>,
    /// Finite-difference step.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Use central instead of forward differences.
    #[arg(long)]
    pub central: bool,
    /// Number of stored curvature pairs.
    #[arg(long)]
    pub memory: Option<usize>,
    /// Five term weights (g1, g2, rep, hyd, hd), comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Option<Vec<f64>>,
    /// Keep only receptor atoms within this radius (Å) of the ligand centroid.
    #[arg(long)]
    pub clip_radius: Option<f64>,
    /// Refined SDF (single-ligand mode).
    #[arg(long, conflicts_with = "manifest")]
    pub out: Option<PathBuf>,
    /// Trace CSV (single-ligand mode).
    #[arg(long, conflicts_with = "manifest")]
    pub trace: Option<PathBuf>,
    /// Directory for per-ligand SDF and trace files (manifest mode).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Summary JSON; stdout in single-ligand mode, `<out-dir>/summary.json`
    /// in manifest mode.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker threads; all cores by default.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct RefineConfig {
    epochs: usize,
    step: f64,
    eps: f64,
    scheme: DiffScheme,
    memory: usize,
    gradient_tolerance: f64,
    weights: [f64; 5],
    clip_radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct JobRecord {
    index: usize,
    receptor: PathBuf,
    ligand: PathBuf,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<JobResult>,
}

#[derive(Debug, Clone, Serialize)]
struct JobResult {
    name: String,
    e_init: f64,
    e_opt: f64,
    e_final: f64,
    accepted: bool,
    iterations_used: usize,
    converged: bool,
    /// `(δx, δy, δz, ωx, ωy, ωz)` of the returned pose.
    pose: RigidPose,
    breakdown: BreakdownJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    unknown_receptor_templates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sdf: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<PathBuf>,
}

#[derive(Serialize)]
struct Summary {
    provenance: Provenance<RefineConfig>,
    jobs: usize,
    succeeded: usize,
    failed: usize,
    accepted: usize,
    results: Vec<JobRecord>,
}

struct JobOutput {
    sdf: String,
    trace: Vec<TraceEntry>,
    result: JobResult,
}

fn resolve(args: &RefineArgs, file: &FileConfig) -> Result<(RefineConfig, LbfgsParams)> {
    let f = &file.refine;
    let defaults = LbfgsParams::default();
    let central = args.central || f.central.unwrap_or(false);
    let cfg = RefineConfig {
        epochs: pick(args.epochs, f.epochs, defaults.max_iterations),
        step: config::positive("step", pick(args.step, f.step, defaults.step))?,
        eps: config::positive("eps", pick(args.eps, f.eps, defaults.fd_step))?,
        scheme: if central {
            DiffScheme::Central
        } else {
            DiffScheme::Forward
        },
        memory: config::at_least("memory", pick(args.memory, f.memory, defaults.memory), 1)?,
        gradient_tolerance: f.gradient_tolerance.unwrap_or(defaults.gradient_tolerance),
        weights: config::weights(args.weights.clone(), file.energy.weights)?,
        clip_radius: args.clip_radius.or(file.energy.clip_radius),
    };
    if let Some(r) = cfg.clip_radius {
        config::positive("clip radius", r)?;
    }
    let params = LbfgsParams {
        max_iterations: cfg.epochs,
        step: cfg.step,
        memory: cfg.memory,
        fd_step: cfg.eps,
        scheme: cfg.scheme,
        gradient_tolerance: cfg.gradient_tolerance,
        ..defaults
    };
    params.validate().map_err(|e| UsageError(e.to_string()))?;
    Ok((cfg, params))
}

fn data_fields(r: &RefineResult) -> Vec<(String, String)> {
    vec![
        ("E_init".into(), format!("{:.6}", r.e_init)),
        ("E_opt".into(), format!("{:.6}", r.e_opt)),
        ("E_final".into(), format!("{:.6}", r.returned_energy())),
        ("accepted".into(), r.accepted.to_string()),
        ("iterations".into(), r.iterations_used.to_string()),
        ("converged".into(), r.converged.to_string()),
    ]
}

fn run_job(entry: &ManifestEntry, cfg: &RefineConfig, params: &LbfgsParams) -> Result<JobOutput> {
    let (pocket, lig) = load_complex(&entry.receptor, &entry.ligand, cfg.clip_radius)?;
    let sp = ScoringPocket::new(&pocket)?;
    let sl = ScoringLigand::new(&lig)?;
    let r = lbfgs_refine(
        &sp,
        &sl,
        &EnergyModel {
            weights: cfg.weights,
        },
        params,
    )?;
    if let Some(f) = &r.failure {
        warn!("{}: refinement stopped early: {f}", entry.ligand.display());
    }
    Ok(JobOutput {
        sdf: write_ligand(&lig, Some(r.returned_pose()), &data_fields(&r)),
        trace: r.trace.clone(),
        result: JobResult {
            name: lig.name().to_string(),
            e_init: r.e_init,
            e_opt: r.e_opt,
            e_final: r.returned_energy(),
            accepted: r.accepted,
            iterations_used: r.iterations_used,
            converged: r.converged,
            pose: r.returned_pose().clone(),
            breakdown: (&r.final_breakdown).into(),
            failure: r.failure.clone(),
            unknown_receptor_templates: sp.typing_report().unknown_templates,
            sdf: None,
            trace: None,
        },
    })
}

fn write_artifacts(
    out: &mut JobOutput,
    prov: &Provenance<RefineConfig>,
    sdf: Option<&Path>,
    trace: Option<&Path>,
) -> Result<()> {
    if let Some(p) = sdf {
        emit(Some(p), &out.sdf)?;
        out.result.sdf = Some(p.to_path_buf());
    }
    if let Some(p) = trace {
        emit(Some(p), &csv_text(prov, &out.trace)?)?;
        out.result.trace = Some(p.to_path_buf());
    }
    Ok(())
}

pub fn run(args: RefineArgs, file: &FileConfig) -> Result<Outcome> {
    let (cfg, params) = resolve(&args, file)?;
    let prov = Provenance::new("refine", cfg.clone());
    let manifest_mode = args.manifest.is_some();
    let entries = match (&args.manifest, &args.receptor, &args.ligand) {
        (Some(m), _, _) => read_manifest(m)?,
        (None, Some(r), Some(l)) => vec![ManifestEntry {
            line: 0,
            receptor: r.clone(),
            ligand: l.clone(),
        }],
        _ => bail!(UsageError(
            "give --receptor and --ligand, or --manifest".into()
        )),
    };
    if manifest_mode && args.out_dir.is_none() {
        bail!(UsageError("--manifest needs --out-dir".into()));
    }

    let pool = thread_pool(args.jobs.or(file.jobs))?;
    let outputs: Vec<Result<JobOutput>> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| run_job(e, &cfg, &params))
            .collect()
    });

    let mut results = Vec::with_capacity(entries.len());
    let mut failed = 0;
    for (index, (entry, output)) in entries.iter().zip(outputs).enumerate() {
        let record = match output {
            Ok(mut out) => {
                let (sdf, trace) = match &args.out_dir {
                    Some(dir) => {
                        let stem = job_stem(index, &entry.ligand);
                        (
                            Some(dir.join(format!("{stem}.sdf"))),
                            Some(dir.join(format!("{stem}.trace.csv"))),
                        )
                    }
                    None => (args.out.clone(), args.trace.clone()),
                };
                write_artifacts(&mut out, &prov, sdf.as_deref(), trace.as_deref())?;
                info!(
                    "{}: E_init {:.4} -> {:.4} ({})",
                    entry.ligand.display(),
                    out.result.e_init,
                    out.result.e_final,
                    if out.result.accepted {
                        "accepted"
                    } else {
                        "kept input"
                    }
                );
                JobRecord {
                    index,
                    receptor: entry.receptor.clone(),
                    ligand: entry.ligand.clone(),
                    status: "ok",
                    error: None,
                    result: Some(out.result),
                }
            }
            Err(e) => {
                failed += 1;
                warn!("job {index} ({}): {e:#}", entry.ligand.display());
                JobRecord {
                    index,
                    receptor: entry.receptor.clone(),
                    ligand: entry.ligand.clone(),
                    status: "error",
                    error: Some(format!("{e:#}")),
                    result: None,
                }
            }
        };
        results.push(record);
    }

    let accepted = results
        .iter()
        .filter(|r| r.result.as_ref().is_some_and(|x| x.accepted))
        .count();
    let summary = Summary {
        provenance: prov,
        jobs: results.len(),
        succeeded: results.len() - failed,
        failed,
        accepted,
        results,
    };
    let report = match (&args.report, &args.out_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) if manifest_mode => Some(dir.join("summary.json")),
        _ => None,
    };
    emit(report.as_deref(), &json(&summary)?)?;
    Ok(Outcome { failures: failed })
}
