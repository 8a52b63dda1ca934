use std::path::Path;

use anyhow::{Context, Result};

use sbdd_core::molio::{read_ligand, read_receptor, Clip, MolecularGraph, PocketStructure};

/// Reads the first ligand record and its receptor, optionally clipped to a
/// sphere about the ligand heavy-atom centroid.
pub fn load_complex(
    receptor: &Path,
    ligand: &Path,
    clip_radius: Option<f64>,
) -> Result<(PocketStructure, MolecularGraph)> {
    let lig = read_ligand(ligand).with_context(|| format!("ligand {}", ligand.display()))?;
    let clip = match clip_radius {
        Some(radius) => {
            let center = lig
                .heavy_centroid()
                .with_context(|| format!("ligand {} has no heavy atoms", ligand.display()))?;
            Some(Clip { center, radius })
        }
        None => None,
    };
    let pocket = read_receptor(receptor, clip)
        .with_context(|| format!("receptor {}", receptor.display()))?;
    Ok((pocket, lig))
}
