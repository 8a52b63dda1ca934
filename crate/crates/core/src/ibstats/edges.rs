use serde::Serialize;

use crate::energy::CellGrid;
use crate::molio::{MolecularGraph, PocketStructure};
use crate::Vec3;

pub const DEFAULT_EDGE_THRESHOLD: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirtualEdge {
    /// Index into `PocketStructure::atoms`.
    pub pocket: usize,
    /// Index into the ligand graph's atoms.
    pub ligand: usize,
    pub distance: f64,
}

/// Pocket–ligand heavy-atom pairs strictly closer than `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VirtualEdgeGraph {
    /// Sorted by `(ligand, pocket)`.
    pub edges: Vec<VirtualEdge>,
    pub threshold: f64,
}

impl VirtualEdgeGraph {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Every heavy cross pair with distance `< threshold`. Waters count as pocket
/// atoms.
pub fn build_virtual_edges(
    pocket: &PocketStructure,
    ligand: &MolecularGraph,
    threshold: f64,
) -> VirtualEdgeGraph {
    let pocket_heavy: Vec<usize> = (0..pocket.atoms.len())
        .filter(|&i| pocket.atoms[i].is_heavy())
        .collect();
    let points: Vec<Vec3> = pocket_heavy
        .iter()
        .map(|&i| pocket.atoms[i].position)
        .collect();
    let mut edges = Vec::new();
    if threshold > 0.0 && !points.is_empty() {
        let grid = CellGrid::new(&points, threshold);
        let mut hits = Vec::new();
        for l in ligand.heavy_indices() {
            let q = ligand.atoms()[l].position;
            hits.clear();
            grid.for_each_candidate(&q, |k| {
                let distance = (points[k] - q).norm();
                if distance < threshold {
                    hits.push(VirtualEdge {
                        pocket: pocket_heavy[k],
                        ligand: l,
                        distance,
                    });
                }
            });
            hits.sort_by_key(|e| e.pocket);
            edges.extend_from_slice(&hits);
        }
    }
    VirtualEdgeGraph { edges, threshold }
}
