use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::edges::{build_virtual_edges, VirtualEdgeGraph};
use super::interactions::{classify_interactions, InteractionRecord, InteractionThresholds};
use crate::molio::{MolecularGraph, PocketStructure};
use crate::scaffold::{MaskAssignment, Task};
use crate::{Error, Result};

/// The four-dimensional context summary `Z = (n̄, d̄, t̄, k̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContextSummary {
    pub task: Task,
    pub context_size: usize,
    /// Mean virtual-edge degree per tallied atom.
    pub n_bar: f64,
    /// Mean length over all edges incident to tallied atoms; `None` without
    /// edges.
    pub d_bar: Option<f64>,
    /// Mean number of distinct interaction categories per tallied atom.
    pub t_bar: f64,
    /// Mean number of distinct pocket partners in interaction records.
    pub k_bar: f64,
}

impl ContextSummary {
    /// `[n̄, d̄, t̄, k̄]`, or `None` when `d̄` is undefined.
    pub fn vector(&self) -> Option<[f64; 4]> {
        self.d_bar.map(|d| [self.n_bar, d, self.t_bar, self.k_bar])
    }
}

/// Tallied atoms: the mask's context for SH and SC, every target atom (the
/// whole heavy ligand) for DN.
pub fn tally_set(mask: &MaskAssignment) -> Vec<usize> {
    let mut atoms = match mask.task {
        Task::DeNovo => [mask.target.as_slice(), mask.context.as_slice()].concat(),
        _ => mask.context.clone(),
    };
    atoms.sort_unstable();
    atoms.dedup();
    atoms
}

/// Summary over precomputed edges and interaction records.
pub fn summarize_records(
    task: Task,
    tally: &[usize],
    edges: &VirtualEdgeGraph,
    records: &[InteractionRecord],
) -> Result<ContextSummary> {
    if tally.is_empty() {
        return Err(Error::Empty("no atoms to tally for this mask"));
    }
    let set: BTreeSet<usize> = tally.iter().copied().collect();
    let mut degree = 0usize;
    let mut length = 0.0;
    for e in edges.edges.iter().filter(|e| set.contains(&e.ligand)) {
        degree += 1;
        length += e.distance;
    }
    let mut categories: HashMap<usize, BTreeSet<_>> = HashMap::new();
    let mut partners: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for r in records.iter().filter(|r| set.contains(&r.ligand_atom)) {
        categories
            .entry(r.ligand_atom)
            .or_default()
            .insert(r.category);
        partners
            .entry(r.ligand_atom)
            .or_default()
            .insert(r.pocket_atom);
    }
    let n = set.len() as f64;
    Ok(ContextSummary {
        task,
        context_size: set.len(),
        n_bar: degree as f64 / n,
        d_bar: (degree > 0).then(|| length / degree as f64),
        t_bar: categories.values().map(BTreeSet::len).sum::<usize>() as f64 / n,
        k_bar: partners.values().map(BTreeSet::len).sum::<usize>() as f64 / n,
    })
}

/// Context summary of one complex under `mask`.
pub fn summarize(
    pocket: &PocketStructure,
    ligand: &MolecularGraph,
    mask: &MaskAssignment,
    edge_threshold: f64,
    thresholds: &InteractionThresholds,
) -> Result<ContextSummary> {
    let edges = build_virtual_edges(pocket, ligand, edge_threshold);
    let records = classify_interactions(pocket, ligand, thresholds);
    summarize_records(mask.task, &tally_set(mask), &edges, &records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ibstats::{InteractionCategory, VirtualEdge};

    #[test]
    fn three_edges_no_interactions() {
        let edges = VirtualEdgeGraph {
            edges: [4.0, 5.0, 5.0]
                .iter()
                .enumerate()
                .map(|(p, &distance)| VirtualEdge {
                    pocket: p,
                    ligand: 0,
                    distance,
                })
                .collect(),
            threshold: 6.0,
        };
        let z = summarize_records(Task::SideChainDecoration, &[0], &edges, &[]).unwrap();
        assert_eq!(z.n_bar, 3.0);
        assert!((z.d_bar.unwrap() - 14.0 / 3.0).abs() < 1e-15);
        assert_eq!((z.t_bar, z.k_bar), (0.0, 0.0));
    }

    #[test]
    fn no_edges_leaves_d_bar_absent() {
        let edges = VirtualEdgeGraph {
            edges: vec![],
            threshold: 6.0,
        };
        let z = summarize_records(Task::DeNovo, &[0, 1], &edges, &[]).unwrap();
        assert_eq!(z.d_bar, None);
        assert_eq!(z.vector(), None);
        assert!(summarize_records(Task::ScaffoldHopping, &[], &edges, &[]).is_err());
    }

    #[test]
    fn categories_and_partners_are_distinct_counts() {
        let edges = VirtualEdgeGraph {
            edges: vec![],
            threshold: 6.0,
        };
        let rec = |category, ligand_atom, pocket_atom| InteractionRecord {
            category,
            ligand_atom,
            pocket_atom,
            distance: 3.0,
            centroid_distance: None,
        };
        let records = [
            rec(InteractionCategory::Hydrophobic, 0, 5),
            rec(InteractionCategory::Hydrophobic, 0, 6),
            rec(InteractionCategory::HydrogenBond, 0, 5),
            rec(InteractionCategory::Halogen, 1, 7),
            rec(InteractionCategory::Metal, 9, 8),
        ];
        let z = summarize_records(Task::ScaffoldHopping, &[0, 1], &edges, &records).unwrap();
        assert_eq!(z.t_bar, 1.5);
        assert_eq!(z.k_bar, 1.5);
    }
}
