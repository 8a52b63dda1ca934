use std::collections::{BTreeSet, HashMap};

use nalgebra::Matrix3;
use serde::Serialize;

use crate::molio::{Element, MolecularGraph, PocketStructure};
use crate::Vec3;

/// Maximum RMS deviation from the best-fit plane for an aromatic ring.
pub const PLANARITY_TOLERANCE: f64 = 0.1;

const COVALENT_CUTOFF: f64 = 1.9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AromaticRing {
    /// Member indices, ascending.
    pub atoms: Vec<usize>,
    pub centroid: Vec3,
}

/// RMS distance of `points` from their least-squares plane.
pub fn plane_rms(points: &[Vec3]) -> f64 {
    let n = points.len() as f64;
    let c = points.iter().sum::<Vec3>() / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = p - c;
        cov += d * d.transpose();
    }
    let smallest = cov.symmetric_eigenvalues().min().max(0.0);
    (smallest / n).sqrt()
}

fn ring_from(atoms: Vec<usize>, positions: &[Vec3]) -> Option<AromaticRing> {
    let pts: Vec<Vec3> = atoms.iter().map(|&i| positions[i]).collect();
    (plane_rms(&pts) < PLANARITY_TOLERANCE).then(|| AromaticRing {
        centroid: pts.iter().sum::<Vec3>() / pts.len() as f64,
        atoms,
    })
}

/// Simple cycles of length 5 or 6 whose members all satisfy `allowed`, as
/// sorted vertex sets.
fn small_cycles(adj: &[Vec<usize>], allowed: &[bool]) -> Vec<Vec<usize>> {
    let mut found = BTreeSet::new();
    let mut path = Vec::with_capacity(6);
    fn extend(
        adj: &[Vec<usize>],
        allowed: &[bool],
        start: usize,
        path: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<usize>>,
    ) {
        let last = *path.last().expect("path starts non-empty");
        for &w in &adj[last] {
            if w == start && path.len() >= 5 {
                let mut ring = path.clone();
                ring.sort_unstable();
                found.insert(ring);
            } else if w > start && allowed[w] && path.len() < 6 && !path.contains(&w) {
                path.push(w);
                extend(adj, allowed, start, path, found);
                path.pop();
            }
        }
    }
    for s in 0..adj.len() {
        if !allowed[s] {
            continue;
        }
        path.clear();
        path.push(s);
        extend(adj, allowed, s, &mut path, &mut found);
    }
    found.into_iter().collect()
}

fn is_ring_element(e: Element) -> bool {
    matches!(e, Element::C | Element::N)
}

/// Planar 5- and 6-membered C/N rings of a ligand.
pub fn ligand_aromatic_rings(graph: &MolecularGraph) -> Vec<AromaticRing> {
    let adj: Vec<Vec<usize>> = (0..graph.len())
        .map(|i| graph.heavy_neighbors(i).map(|(j, _)| j).collect())
        .collect();
    let allowed: Vec<bool> = graph
        .atoms()
        .iter()
        .map(|a| is_ring_element(a.element))
        .collect();
    let positions = graph.positions();
    small_cycles(&adj, &allowed)
        .into_iter()
        .filter_map(|r| ring_from(r, &positions))
        .collect()
}

fn residue_rings(res: &str) -> &'static [&'static [&'static str]] {
    match res {
        "PHE" | "TYR" => &[&["CG", "CD1", "CD2", "CE1", "CE2", "CZ"]],
        "HIS" => &[&["CG", "ND1", "CD2", "CE1", "NE2"]],
        "TRP" => &[
            &["CG", "CD1", "NE1", "CE2", "CD2"],
            &["CD2", "CE2", "CE3", "CZ2", "CZ3", "CH2"],
        ],
        _ => &[],
    }
}

/// Aromatic rings of the pocket: side-chain templates for PHE, TYR, HIS and
/// TRP; other non-water residues by covalent-distance cycles. Every ring
/// must pass the planarity check.
pub fn pocket_aromatic_rings(pocket: &PocketStructure) -> Vec<AromaticRing> {
    let positions: Vec<Vec3> = pocket.atoms.iter().map(|a| a.position).collect();
    let mut by_residue: HashMap<(char, i32, char, &str), Vec<usize>> = HashMap::new();
    for (i, a) in pocket.atoms.iter().enumerate() {
        if let Some(r) = a.residue() {
            if a.is_heavy() && !r.is_water() {
                by_residue
                    .entry((r.chain, r.res_seq, r.icode, r.res_name.as_str()))
                    .or_default()
                    .push(i);
            }
        }
    }
    let mut keys: Vec<_> = by_residue.keys().copied().collect();
    keys.sort_unstable();
    let mut rings = Vec::new();
    for key in keys {
        let members = &by_residue[&key];
        let res = key.3;
        if pocket.atoms[members[0]]
            .residue()
            .and_then(|r| r.residue_code())
            .is_some()
        {
            for names in residue_rings(res) {
                let idx: Option<Vec<usize>> = names
                    .iter()
                    .map(|n| {
                        members
                            .iter()
                            .copied()
                            .find(|&i| pocket.atoms[i].name == *n)
                    })
                    .collect();
                if let Some(mut idx) = idx {
                    idx.sort_unstable();
                    rings.extend(ring_from(idx, &positions));
                }
            }
        } else {
            let mut adj = vec![Vec::new(); members.len()];
            for (a, &i) in members.iter().enumerate() {
                for (b, &j) in members.iter().enumerate().skip(a + 1) {
                    if (positions[i] - positions[j]).norm() <= COVALENT_CUTOFF {
                        adj[a].push(b);
                        adj[b].push(a);
                    }
                }
            }
            let allowed: Vec<bool> = members
                .iter()
                .map(|&i| is_ring_element(pocket.atoms[i].element))
                .collect();
            for cyc in small_cycles(&adj, &allowed) {
                let mut idx: Vec<usize> = cyc.iter().map(|&k| members[k]).collect();
                idx.sort_unstable();
                rings.extend(ring_from(idx, &positions));
            }
        }
    }
    rings
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_hexagon_is_planar_and_puckered_is_not() {
        let hex: Vec<Vec3> = (0..6)
            .map(|k| {
                let a = k as f64 * std::f64::consts::PI / 3.0;
                Vec3::new(1.39 * a.cos(), 1.39 * a.sin(), 0.0)
            })
            .collect();
        assert!(plane_rms(&hex) < 1e-12);
        let chair: Vec<Vec3> = hex
            .iter()
            .enumerate()
            .map(|(k, p)| p + Vec3::new(0.0, 0.0, if k % 2 == 0 { 0.25 } else { -0.25 }))
            .collect();
        assert!((plane_rms(&chair) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn cycles_of_naphthalene_skeleton() {
        // Two fused hexagons sharing the 0–5 edge: two 6-rings, no 10-ring.
        let edges = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 0),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 9),
            (9, 0),
        ];
        let mut adj = vec![Vec::new(); 10];
        for (a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let cycles = small_cycles(&adj, &[true; 10]);
        assert_eq!(cycles, vec![vec![0, 1, 2, 3, 4, 5], vec![0, 5, 6, 7, 8, 9]]);
    }
}
