//! Receptor (PDB) and ligand (V2000 SDF) structures and their file formats.

mod element;
mod pdb;
mod sdf;
mod structure;

pub use element::Element;
pub use pdb::{parse_receptor, read_receptor, Clip};
pub use sdf::{parse_ligand, read_ligand, read_sdf, write_ligand, SdfReader, SdfRecord};
pub use structure::{
    heavy_atom_sphere_check, Atom, AtomRole, Bond, BondOrder, MolecularGraph, PocketStructure,
    ResidueInfo, SphereCheck, SAMPLING_SPHERE_RADIUS, STANDARD_RESIDUES, WATER_RESIDUES,
};
