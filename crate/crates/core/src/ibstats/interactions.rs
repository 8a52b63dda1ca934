use std::fmt;

use serde::{Deserialize, Serialize};

use super::aromatic::{ligand_aromatic_rings, pocket_aromatic_rings, AromaticRing};
use crate::energy::{type_ligand, type_receptor, AtomType};
use crate::molio::{Element, MolecularGraph, PocketStructure};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InteractionCategory {
    Hydrophobic,
    HydrogenBond,
    WaterBridge,
    PiPi,
    PiCation,
    Halogen,
    Metal,
}

impl InteractionCategory {
    pub const ALL: [InteractionCategory; 7] = [
        InteractionCategory::Hydrophobic,
        InteractionCategory::HydrogenBond,
        InteractionCategory::WaterBridge,
        InteractionCategory::PiPi,
        InteractionCategory::PiCation,
        InteractionCategory::Halogen,
        InteractionCategory::Metal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InteractionCategory::Hydrophobic => "hydrophobic",
            InteractionCategory::HydrogenBond => "hydrogen-bond",
            InteractionCategory::WaterBridge => "water-bridge",
            InteractionCategory::PiPi => "pi-pi",
            InteractionCategory::PiCation => "pi-cation",
            InteractionCategory::Halogen => "halogen",
            InteractionCategory::Metal => "metal",
        }
    }
}

impl fmt::Display for InteractionCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Distance gates in Å; every rule is inclusive (`≤`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InteractionThresholds {
    pub hydrophobic: f64,
    pub hydrogen_bond: f64,
    /// Ligand polar atom to water oxygen.
    pub water_ligand: f64,
    /// Water oxygen to receptor polar atom.
    pub water_receptor: f64,
    pub pi_pi: f64,
    pub pi_cation: f64,
    pub halogen: f64,
    pub metal: f64,
}

impl Default for InteractionThresholds {
    fn default() -> Self {
        InteractionThresholds {
            hydrophobic: 4.0,
            hydrogen_bond: 3.5,
            water_ligand: 3.5,
            water_receptor: 3.5,
            pi_pi: 5.5,
            pi_cation: 6.0,
            halogen: 3.5,
            metal: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionRecord {
    pub category: InteractionCategory,
    pub ligand_atom: usize,
    /// Water oxygen for water bridges; nearest ring member for ring rules.
    pub pocket_atom: usize,
    pub distance: f64,
    /// Ring-centroid distance for the pi categories.
    pub centroid_distance: Option<f64>,
}

fn is_receptor_cation(res: &str, name: &str) -> bool {
    matches!((res, name), ("LYS", "NZ") | ("ARG", "NE" | "NH1" | "NH2"))
}

fn nearest(members: &[usize], positions: impl Fn(usize) -> Vec3, to: &Vec3) -> (usize, f64) {
    members
        .iter()
        .map(|&i| (i, (positions(i) - to).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("rings are non-empty")
}

/// All geometric interaction records between heavy atoms of `pocket` and
/// `ligand`. One pair may satisfy several rules.
///
/// Waters take part only as bridges. A ring rule emits one record per ligand
/// ring atom (or per ligand cation facing a pocket ring).
pub fn classify_interactions(
    pocket: &PocketStructure,
    ligand: &MolecularGraph,
    th: &InteractionThresholds,
) -> Vec<InteractionRecord> {
    let (ptypes, _) = type_receptor(pocket);
    let ltypes = type_ligand(ligand);
    classify_typed(pocket, &ptypes, ligand, &ltypes, th)
}

pub(crate) fn classify_typed(
    pocket: &PocketStructure,
    ptypes: &[AtomType],
    ligand: &MolecularGraph,
    ltypes: &[AtomType],
    th: &InteractionThresholds,
) -> Vec<InteractionRecord> {
    use InteractionCategory::*;
    let patoms = &pocket.atoms;
    let latoms = ligand.atoms();
    let lheavy = ligand.heavy_indices();
    let pheavy: Vec<usize> = (0..patoms.len())
        .filter(|&i| patoms[i].is_heavy())
        .collect();
    let waters: Vec<usize> = pheavy
        .iter()
        .copied()
        .filter(|&i| patoms[i].is_water() && patoms[i].element == Element::O)
        .collect();
    let polar = |t: &AtomType| t.donor || t.acceptor;
    let mut out = Vec::new();
    let record =
        |category, ligand_atom, pocket_atom, distance, centroid_distance| InteractionRecord {
            category,
            ligand_atom,
            pocket_atom,
            distance,
            centroid_distance,
        };

    for &l in &lheavy {
        let la = &latoms[l];
        let lt = &ltypes[l];
        for &p in &pheavy {
            let pa = &patoms[p];
            if pa.is_water() {
                continue;
            }
            let pt = &ptypes[p];
            let d = (la.position - pa.position).norm();
            if lt.hydrophobic && pt.hydrophobic && d <= th.hydrophobic {
                out.push(record(Hydrophobic, l, p, d, None));
            }
            if lt.hbond_pair(pt) && d <= th.hydrogen_bond {
                out.push(record(HydrogenBond, l, p, d, None));
            }
            if la.element.is_halogen() && la.element != Element::F && pt.acceptor && d <= th.halogen
            {
                out.push(record(Halogen, l, p, d, None));
            }
            if pa.element.is_metal()
                && matches!(la.element, Element::N | Element::O | Element::S)
                && d <= th.metal
            {
                out.push(record(Metal, l, p, d, None));
            }
        }
        if polar(lt) {
            for &w in &waters {
                let d = (la.position - patoms[w].position).norm();
                if d > th.water_ligand {
                    continue;
                }
                let bridged = pheavy.iter().any(|&p| {
                    !patoms[p].is_water()
                        && polar(&ptypes[p])
                        && (patoms[p].position - patoms[w].position).norm() <= th.water_receptor
                });
                if bridged {
                    out.push(record(WaterBridge, l, w, d, None));
                }
            }
        }
    }

    let lrings = ligand_aromatic_rings(ligand);
    let prings = pocket_aromatic_rings(pocket);
    let lpos = |i: usize| latoms[i].position;
    let ppos = |i: usize| patoms[i].position;
    for lr in &lrings {
        for pr in &prings {
            let c = (lr.centroid - pr.centroid).norm();
            if c <= th.pi_pi {
                for &l in &lr.atoms {
                    let (p, d) = nearest(&pr.atoms, ppos, &lpos(l));
                    out.push(record(PiPi, l, p, d, Some(c)));
                }
            }
        }
        for &p in &pheavy {
            let pa = &patoms[p];
            let cation = pa
                .residue()
                .is_some_and(|r| is_receptor_cation(&r.res_name, &pa.name))
                || (pa.element == Element::N && pa.formal_charge > 0);
            if !cation {
                continue;
            }
            let c = (lr.centroid - pa.position).norm();
            if c <= th.pi_cation {
                for &l in &lr.atoms {
                    out.push(record(
                        PiCation,
                        l,
                        p,
                        (lpos(l) - pa.position).norm(),
                        Some(c),
                    ));
                }
            }
        }
    }
    for &l in &lheavy {
        let la = &latoms[l];
        if !(la.element == Element::N && la.formal_charge > 0) {
            continue;
        }
        for pr in &prings {
            let c = (la.position - pr.centroid).norm();
            if c <= th.pi_cation {
                let (p, d) = nearest(&pr.atoms, ppos, &la.position);
                out.push(record(PiCation, l, p, d, Some(c)));
            }
        }
    }
    out
}

/// Rings reported for diagnostics.
pub fn aromatic_rings(
    pocket: &PocketStructure,
    ligand: &MolecularGraph,
) -> (Vec<AromaticRing>, Vec<AromaticRing>) {
    (pocket_aromatic_rings(pocket), ligand_aromatic_rings(ligand))
}
