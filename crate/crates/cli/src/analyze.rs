use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use sbdd_core::ibstats::{
    build_virtual_edges, classify_interactions, information_density, summarize_records, tally_set,
    ContextSummary, DensityReport, InteractionThresholds, DEFAULT_EDGE_THRESHOLD, DEFAULT_GRIDSIZE,
    DEFAULT_NEIGHBORS,
};
use sbdd_core::scaffold::{decompose, make_mask, Task};

use crate::config::{self, pick, FileConfig};
use crate::inputs::load_complex;
use crate::output::{csv_text, emit, json, read_manifest, thread_pool, ManifestEntry, Provenance};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Tab-separated receptor/ligand pairs.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Tasks to summarize, comma separated (SH, SC, DN); all by default.
    #[arg(long, value_delimiter = ',')]
    pub tasks: Option<Vec<Task>>,
    /// Per-complex CSV; stdout by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Corpus-level density report.
    #[arg(long)]
    pub corpus_json: Option<PathBuf>,
    /// Ligand-receptor distance (Å) below which a virtual edge exists.
    #[arg(long)]
    pub edge_threshold: Option<f64>,
    /// Neighbour rank of the entropy estimator.
    #[arg(long)]
    pub neighbors: Option<usize>,
    /// Hexagons across the x range of each density plane.
    #[arg(long)]
    pub gridsize: Option<usize>,
    /// Keep only receptor atoms within this radius (Å) of the ligand centroid.
    #[arg(long)]
    pub clip_radius: Option<f64>,
    /// Worker threads; all cores by default.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct AnalyzeConfig {
    tasks: Vec<Task>,
    edge_threshold: f64,
    neighbors: usize,
    gridsize: usize,
    clip_radius: Option<f64>,
    interactions: InteractionThresholds,
}

#[derive(Debug, Serialize)]
struct Row {
    index: usize,
    ligand: String,
    task: Task,
    n_bar: Option<f64>,
    d_bar: Option<f64>,
    t_bar: Option<f64>,
    k_bar: Option<f64>,
    context_size: Option<usize>,
    status: String,
}

#[derive(Serialize)]
struct TaskDensity {
    task: Task,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    report: Option<DensityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct CorpusReport {
    provenance: Provenance<AnalyzeConfig>,
    complexes: usize,
    failed: usize,
    tasks: Vec<TaskDensity>,
}

type TaskResult = (Task, Result<ContextSummary, String>);

fn analyze_one(entry: &ManifestEntry, cfg: &AnalyzeConfig) -> Result<Vec<TaskResult>> {
    let (pocket, lig) = load_complex(&entry.receptor, &entry.ligand, cfg.clip_radius)?;
    if lig.heavy_count() == 0 {
        anyhow::bail!("ligand {} has no heavy atoms", entry.ligand.display());
    }
    let d = decompose(&lig);
    let edges = build_virtual_edges(&pocket, &lig, cfg.edge_threshold);
    let records = classify_interactions(&pocket, &lig, &cfg.interactions);
    Ok(cfg
        .tasks
        .iter()
        .map(|&task| {
            let s = make_mask(&d, task)
                .and_then(|m| summarize_records(task, &tally_set(&m), &edges, &records))
                .map_err(|e| e.to_string());
            (task, s)
        })
        .collect())
}

pub fn run(args: AnalyzeArgs, file: &FileConfig) -> Result<Outcome> {
    let f = &file.analyze;
    let mut tasks = args.tasks.or(f.tasks.clone()).unwrap_or(Task::ALL.to_vec());
    let mut seen = std::collections::BTreeSet::new();
    tasks.retain(|t| seen.insert(*t));
    let cfg = AnalyzeConfig {
        tasks,
        edge_threshold: config::positive(
            "edge threshold",
            pick(
                args.edge_threshold,
                f.edge_threshold,
                DEFAULT_EDGE_THRESHOLD,
            ),
        )?,
        neighbors: config::at_least(
            "neighbors",
            pick(args.neighbors, f.neighbors, DEFAULT_NEIGHBORS),
            1,
        )?,
        gridsize: config::at_least(
            "gridsize",
            pick(args.gridsize, f.gridsize, DEFAULT_GRIDSIZE),
            1,
        )?,
        clip_radius: args.clip_radius.or(file.energy.clip_radius),
        interactions: config::thresholds(file.interactions)?,
    };
    if let Some(r) = cfg.clip_radius {
        config::positive("clip radius", r)?;
    }
    let entries = read_manifest(&args.manifest)?;
    let pool = thread_pool(args.jobs.or(file.jobs))?;
    let results: Vec<Result<Vec<TaskResult>>> =
        pool.install(|| entries.par_iter().map(|e| analyze_one(e, &cfg)).collect());

    let mut rows = Vec::new();
    let mut per_task: Vec<Vec<ContextSummary>> = vec![Vec::new(); cfg.tasks.len()];
    let mut failed = 0;
    for (index, (entry, result)) in entries.iter().zip(results).enumerate() {
        let ligand = entry.ligand.display().to_string();
        match result {
            Ok(task_results) => {
                for (k, (task, s)) in task_results.into_iter().enumerate() {
                    rows.push(match s {
                        Ok(s) => {
                            per_task[k].push(s);
                            Row {
                                index,
                                ligand: ligand.clone(),
                                task,
                                n_bar: Some(s.n_bar),
                                d_bar: s.d_bar,
                                t_bar: Some(s.t_bar),
                                k_bar: Some(s.k_bar),
                                context_size: Some(s.context_size),
                                status: "ok".into(),
                            }
                        }
                        Err(e) => Row {
                            index,
                            ligand: ligand.clone(),
                            task,
                            n_bar: None,
                            d_bar: None,
                            t_bar: None,
                            k_bar: None,
                            context_size: None,
                            status: format!("skipped: {e}"),
                        },
                    });
                }
            }
            Err(e) => {
                failed += 1;
                warn!("complex {index} ({ligand}): {e:#}");
                for &task in &cfg.tasks {
                    rows.push(Row {
                        index,
                        ligand: ligand.clone(),
                        task,
                        n_bar: None,
                        d_bar: None,
                        t_bar: None,
                        k_bar: None,
                        context_size: None,
                        status: format!("error: {e:#}"),
                    });
                }
            }
        }
    }

    let prov = Provenance::new("analyze", cfg.clone());
    emit(args.out.as_deref(), &csv_text(&prov, &rows)?)?;

    if let Some(path) = &args.corpus_json {
        let tasks = cfg
            .tasks
            .iter()
            .zip(&per_task)
            .map(|(&task, summaries)| {
                match information_density(summaries, cfg.neighbors, cfg.gridsize) {
                    Ok(report) => TaskDensity {
                        task,
                        report: Some(report),
                        error: None,
                    },
                    Err(e) => TaskDensity {
                        task,
                        report: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect();
        let report = CorpusReport {
            provenance: prov,
            complexes: entries.len(),
            failed,
            tasks,
        };
        emit(Some(path), &json(&report)?).context("writing corpus report")?;
    }
    Ok(Outcome { failures: failed })
}
