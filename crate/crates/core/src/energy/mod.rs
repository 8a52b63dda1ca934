//! Five-term empirical contact energy between a pocket and a posed ligand.
//!
//! Only heavy atoms participate; receptor waters are dropped. Pairs are
//! gathered with a cell list whose edge equals the 8 Å centre-distance
//! cutoff, and [`evaluate_brute_force`] keeps the plain double loop around
//! as a reference.

mod grid;
mod terms;
mod typing;

use serde::{Deserialize, Serialize};

pub use grid::CellGrid;
pub use terms::{pair_terms, surface_distance, CUTOFF, DEFAULT_WEIGHTS};
pub use typing::{hydrogen_count, type_ligand, type_receptor, AtomType, TypingReport};

use crate::molio::{MolecularGraph, PocketStructure};
use crate::refine::RigidPose;
use crate::{Error, Result, Vec3};

/// Term weights; fixed by default, overridable for experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel {
    pub weights: [f64; 5],
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel {
            weights: DEFAULT_WEIGHTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub e_g1: f64,
    pub e_g2: f64,
    pub e_rep: f64,
    pub e_hyd: f64,
    pub e_hd: f64,
    pub weights: [f64; 5],
    /// `weights · (e_g1, e_g2, e_rep, e_hyd, e_hd)`.
    pub total: f64,
    /// Pairs within the cutoff.
    pub pair_count: usize,
}

impl EnergyBreakdown {
    fn from_sums(sums: [f64; 5], weights: [f64; 5], pair_count: usize) -> Self {
        let total = sums.iter().zip(weights).map(|(s, w)| s * w).sum();
        EnergyBreakdown {
            e_g1: sums[0],
            e_g2: sums[1],
            e_rep: sums[2],
            e_hyd: sums[3],
            e_hd: sums[4],
            weights,
            total,
            pair_count,
        }
    }

    pub fn terms(&self) -> [f64; 5] {
        [self.e_g1, self.e_g2, self.e_rep, self.e_hyd, self.e_hd]
    }
}

/// Heavy, non-water pocket atoms with their types and a cell list.
#[derive(Debug, Clone)]
pub struct ScoringPocket {
    positions: Vec<Vec3>,
    types: Vec<AtomType>,
    /// Index of each scoring atom in the source structure.
    source_indices: Vec<usize>,
    grid: CellGrid,
    report: TypingReport,
}

impl ScoringPocket {
    pub fn new(pocket: &PocketStructure) -> Result<Self> {
        let (all_types, report) = type_receptor(pocket);
        let source_indices: Vec<usize> = pocket
            .atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_heavy() && !a.is_water())
            .map(|(i, _)| i)
            .collect();
        if source_indices.is_empty() {
            return Err(Error::Empty("pocket has no heavy non-water atoms"));
        }
        let positions: Vec<Vec3> = source_indices
            .iter()
            .map(|&i| pocket.atoms[i].position)
            .collect();
        let types = source_indices.iter().map(|&i| all_types[i]).collect();
        let grid = CellGrid::new(&positions, CUTOFF);
        Ok(ScoringPocket {
            positions,
            types,
            source_indices,
            grid,
            report,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn types(&self) -> &[AtomType] {
        &self.types
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_indices
    }

    pub fn typing_report(&self) -> TypingReport {
        self.report
    }
}

/// Heavy ligand atoms in their reference coordinates.
#[derive(Debug, Clone)]
pub struct ScoringLigand {
    positions: Vec<Vec3>,
    types: Vec<AtomType>,
    centroid: Vec3,
}

impl ScoringLigand {
    pub fn new(graph: &MolecularGraph) -> Result<Self> {
        let all_types = type_ligand(graph);
        let heavy = graph.heavy_indices();
        if heavy.is_empty() {
            return Err(Error::Empty("ligand has no heavy atoms"));
        }
        let positions: Vec<Vec3> = heavy.iter().map(|&i| graph.atoms()[i].position).collect();
        let types = heavy.iter().map(|&i| all_types[i]).collect();
        let centroid = positions.iter().sum::<Vec3>() / positions.len() as f64;
        Ok(ScoringLigand {
            positions,
            types,
            centroid,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn types(&self) -> &[AtomType] {
        &self.types
    }

    /// Heavy-atom centroid; the rotation centre for refinement.
    pub fn centroid(&self) -> Vec3 {
        self.centroid
    }

    pub fn identity_pose(&self) -> RigidPose {
        RigidPose::identity(self.centroid)
    }
}

fn accumulate(
    sums: &mut [f64; 5],
    count: &mut usize,
    p: &Vec3,
    tp: &AtomType,
    q: &Vec3,
    tq: &AtomType,
) {
    let r = (p - q).norm();
    if r >= CUTOFF {
        return;
    }
    let t = pair_terms(surface_distance(r, tp.vdw_radius, tq.vdw_radius), tp, tq);
    for k in 0..5 {
        sums[k] += t[k];
    }
    *count += 1;
}

impl EnergyModel {
    /// Energy of ligand atoms placed at `coords` (same order as the ligand).
    pub fn evaluate_coords(
        &self,
        pocket: &ScoringPocket,
        types: &[AtomType],
        coords: &[Vec3],
    ) -> EnergyBreakdown {
        let mut sums = [0.0; 5];
        let mut count = 0;
        for (q, tq) in coords.iter().zip(types) {
            pocket.grid.for_each_candidate(q, |i| {
                accumulate(
                    &mut sums,
                    &mut count,
                    &pocket.positions[i],
                    &pocket.types[i],
                    q,
                    tq,
                );
            });
        }
        EnergyBreakdown::from_sums(sums, self.weights, count)
    }

    pub fn evaluate(
        &self,
        pocket: &ScoringPocket,
        ligand: &ScoringLigand,
        pose: &RigidPose,
    ) -> EnergyBreakdown {
        let coords = pose.apply(&ligand.positions);
        self.evaluate_coords(pocket, &ligand.types, &coords)
    }

    /// O(N·M) double loop without neighbour acceleration.
    pub fn evaluate_brute_force(
        &self,
        pocket: &ScoringPocket,
        ligand: &ScoringLigand,
        pose: &RigidPose,
    ) -> EnergyBreakdown {
        let coords = pose.apply(&ligand.positions);
        let mut sums = [0.0; 5];
        let mut count = 0;
        for (p, tp) in pocket.positions.iter().zip(&pocket.types) {
            for (q, tq) in coords.iter().zip(&ligand.types) {
                accumulate(&mut sums, &mut count, p, tp, q, tq);
            }
        }
        EnergyBreakdown::from_sums(sums, self.weights, count)
    }
}

/// Scores `ligand` under `pose` against `pocket` with the default weights.
pub fn evaluate(
    pocket: &PocketStructure,
    ligand: &MolecularGraph,
    pose: &RigidPose,
) -> Result<EnergyBreakdown> {
    let p = ScoringPocket::new(pocket)?;
    let l = ScoringLigand::new(ligand)?;
    Ok(EnergyModel::default().evaluate(&p, &l, pose))
}

/// Brute-force counterpart of [`evaluate`].
pub fn evaluate_brute_force(
    pocket: &PocketStructure,
    ligand: &MolecularGraph,
    pose: &RigidPose,
) -> Result<EnergyBreakdown> {
    let p = ScoringPocket::new(pocket)?;
    let l = ScoringLigand::new(ligand)?;
    Ok(EnergyModel::default().evaluate_brute_force(&p, &l, pose))
}
