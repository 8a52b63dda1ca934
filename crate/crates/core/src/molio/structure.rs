use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::Element;
use crate::{Error, Result, Vec3};

/// The twenty standard amino acids; position gives the residue code.
pub const STANDARD_RESIDUES: [&str; 20] = [
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU", "LYS", "MET",
    "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL",
];

pub const WATER_RESIDUES: [&str; 3] = ["HOH", "WAT", "DOD"];

/// Residue membership of a receptor atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueInfo {
    pub res_name: String,
    pub chain: char,
    pub res_seq: i32,
    pub icode: char,
    pub backbone: bool,
    pub hetero: bool,
}

impl ResidueInfo {
    /// Index into [`STANDARD_RESIDUES`], `None` for waters, ions and ligands.
    pub fn residue_code(&self) -> Option<usize> {
        STANDARD_RESIDUES.iter().position(|r| *r == self.res_name)
    }

    pub fn is_water(&self) -> bool {
        WATER_RESIDUES.contains(&self.res_name.as_str())
    }

    pub fn same_residue(&self, other: &ResidueInfo) -> bool {
        self.chain == other.chain
            && self.res_seq == other.res_seq
            && self.icode == other.icode
            && self.res_name == other.res_name
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AtomRole {
    /// `context` marks atoms held fixed by the generation task.
    Ligand {
        context: bool,
    },
    Receptor(ResidueInfo),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub serial: i64,
    pub name: String,
    pub element: Element,
    pub position: Vec3,
    pub formal_charge: i8,
    pub role: AtomRole,
}

impl Atom {
    pub fn ligand(serial: i64, element: Element, position: Vec3) -> Self {
        Atom {
            serial,
            name: element.symbol().to_string(),
            element,
            position,
            formal_charge: 0,
            role: AtomRole::Ligand { context: false },
        }
    }

    pub fn is_heavy(&self) -> bool {
        self.element.is_heavy()
    }

    pub fn residue(&self) -> Option<&ResidueInfo> {
        match &self.role {
            AtomRole::Receptor(r) => Some(r),
            AtomRole::Ligand { .. } => None,
        }
    }

    pub fn context_flag(&self) -> Option<bool> {
        match self.role {
            AtomRole::Ligand { context } => Some(context),
            AtomRole::Receptor(_) => None,
        }
    }

    pub fn is_backbone(&self) -> bool {
        self.residue().is_some_and(|r| r.backbone)
    }

    pub fn is_water(&self) -> bool {
        self.residue().is_some_and(ResidueInfo::is_water)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(BondOrder::Single),
            2 => Some(BondOrder::Double),
            3 => Some(BondOrder::Triple),
            4 => Some(BondOrder::Aromatic),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }

    /// Valence contribution; aromatic bonds count 1.5.
    pub fn valence(self) -> f64 {
        match self {
            BondOrder::Single => 1.0,
            BondOrder::Double => 2.0,
            BondOrder::Triple => 3.0,
            BondOrder::Aromatic => 1.5,
        }
    }
}

/// Covalent bond with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub order: BondOrder,
}

/// Ligand atoms plus covalent bonds.
///
/// Hydrogens are kept but every downstream consumer works on the heavy-atom
/// subgraph (see [`MolecularGraph::heavy_indices`]).
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularGraph {
    name: String,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<(usize, BondOrder)>>,
}

impl MolecularGraph {
    /// Validates bond endpoints, rejects self-loops and duplicate pairs, and
    /// normalizes every bond to `i < j`.
    pub fn new(name: impl Into<String>, atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Self> {
        let n = atoms.len();
        let mut seen = HashSet::with_capacity(bonds.len());
        let mut normalized = Vec::with_capacity(bonds.len());
        let mut adjacency = vec![Vec::new(); n];
        for b in bonds {
            if b.i >= n || b.j >= n {
                return Err(Error::InvalidGraph(format!(
                    "bond ({}, {}) references a missing atom ({n} atoms)",
                    b.i, b.j
                )));
            }
            if b.i == b.j {
                return Err(Error::InvalidGraph(format!("self-loop on atom {}", b.i)));
            }
            let (i, j) = if b.i < b.j { (b.i, b.j) } else { (b.j, b.i) };
            if !seen.insert((i, j)) {
                return Err(Error::InvalidGraph(format!("duplicate bond ({i}, {j})")));
            }
            adjacency[i].push((j, b.order));
            adjacency[j].push((i, b.order));
            normalized.push(Bond {
                i,
                j,
                order: b.order,
            });
        }
        for a in &atoms {
            if !a.position.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidGraph(format!(
                    "atom {} has non-finite coordinates",
                    a.serial
                )));
            }
            if a.context_flag().is_none() {
                return Err(Error::InvalidGraph(format!(
                    "atom {} carries receptor annotations",
                    a.serial
                )));
            }
        }
        Ok(MolecularGraph {
            name: name.into(),
            atoms,
            bonds: normalized,
            adjacency,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, BondOrder)] {
        &self.adjacency[i]
    }

    pub fn heavy_neighbors(&self, i: usize) -> impl Iterator<Item = (usize, BondOrder)> + '_ {
        self.adjacency[i]
            .iter()
            .copied()
            .filter(|&(j, _)| self.atoms[j].is_heavy())
    }

    pub fn bond_order(&self, i: usize, j: usize) -> Option<BondOrder> {
        self.adjacency[i]
            .iter()
            .find(|&&(k, _)| k == j)
            .map(|&(_, o)| o)
    }

    pub fn heavy_indices(&self) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&i| self.atoms[i].is_heavy())
            .collect()
    }

    pub fn heavy_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.is_heavy()).count()
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.atoms.iter().map(|a| a.position).collect()
    }

    pub fn heavy_centroid(&self) -> Option<Vec3> {
        let heavy: Vec<&Atom> = self.atoms.iter().filter(|a| a.is_heavy()).collect();
        if heavy.is_empty() {
            return None;
        }
        let sum = heavy.iter().fold(Vec3::zeros(), |acc, a| acc + a.position);
        Some(sum / heavy.len() as f64)
    }

    /// Same topology with replaced coordinates.
    pub fn with_positions(&self, positions: &[Vec3]) -> Result<Self> {
        if positions.len() != self.atoms.len() {
            return Err(Error::DimensionMismatch {
                expected: self.atoms.len(),
                got: positions.len(),
            });
        }
        let mut out = self.clone();
        for (a, p) in out.atoms.iter_mut().zip(positions) {
            a.position = *p;
        }
        Ok(out)
    }

    /// Sets `context = true` exactly on the listed atoms, false elsewhere.
    pub fn set_context_flags(&mut self, context: &[usize]) {
        let set: HashSet<usize> = context.iter().copied().collect();
        for (i, a) in self.atoms.iter_mut().enumerate() {
            a.role = AtomRole::Ligand {
                context: set.contains(&i),
            };
        }
    }

    /// Induced subgraph over `keep` (in ascending index order) and the map
    /// from new to old indices.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (MolecularGraph, Vec<usize>) {
        let mut old: Vec<usize> = keep.to_vec();
        old.sort_unstable();
        old.dedup();
        let mut new_of = vec![usize::MAX; self.atoms.len()];
        for (n, &o) in old.iter().enumerate() {
            new_of[o] = n;
        }
        let atoms = old.iter().map(|&o| self.atoms[o].clone()).collect();
        let bonds = self
            .bonds
            .iter()
            .filter(|b| new_of[b.i] != usize::MAX && new_of[b.j] != usize::MAX)
            .map(|b| Bond {
                i: new_of[b.i],
                j: new_of[b.j],
                order: b.order,
            })
            .collect();
        let graph = MolecularGraph::new(self.name.clone(), atoms, bonds)
            .expect("induced subgraph of a valid graph is valid");
        (graph, old)
    }
}

/// Receptor atoms, optionally clipped to a sphere around the binding site.
#[derive(Debug, Clone, PartialEq)]
pub struct PocketStructure {
    pub atoms: Vec<Atom>,
    pub source: String,
    pub clip_center: Option<Vec3>,
    pub clip_radius: Option<f64>,
}

impl PocketStructure {
    pub fn heavy_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.is_heavy()).count()
    }

    /// Translated copy; used by tests and by callers that recentre frames.
    pub fn translated(&self, v: &Vec3) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            a.position += v;
        }
        if let Some(c) = &mut out.clip_center {
            *c += v;
        }
        out
    }
}

/// Result of [`heavy_atom_sphere_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereCheck {
    pub inside: bool,
    pub violating: Vec<usize>,
}

/// Radius of the sampling sphere generated poses must occupy.
pub const SAMPLING_SPHERE_RADIUS: f64 = 10.0;

/// Whether every heavy atom lies within `radius` of `center` (boundary
/// inclusive); violating atom indices are reported.
pub fn heavy_atom_sphere_check(graph: &MolecularGraph, center: &Vec3, radius: f64) -> SphereCheck {
    let violating: Vec<usize> = graph
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_heavy() && (a.position - center).norm() > radius)
        .map(|(i, _)| i)
        .collect();
    SphereCheck {
        inside: violating.is_empty(),
        violating,
    }
}
