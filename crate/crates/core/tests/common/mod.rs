//! Fixture builders shared by the integration tests.
#![allow(dead_code)]

use nalgebra::Matrix3;
use rand::Rng;
use sbdd_core::molio::{parse_receptor, read_sdf, MolecularGraph, PocketStructure};
use sbdd_core::refine::rodrigues;
use sbdd_core::Vec3;

pub fn data_path(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn corpus() -> Vec<MolecularGraph> {
    read_sdf(data_path("corpus.sdf"))
        .unwrap()
        .into_iter()
        .map(|r| r.graph)
        .collect()
}

/// One fixed-column ATOM/HETATM record.
pub fn pdb_line(
    serial: usize,
    name: &str,
    res: &str,
    seq: usize,
    p: &Vec3,
    element: &str,
) -> String {
    let record = if res == "HOH" || res == "ZN" {
        "HETATM"
    } else {
        "ATOM  "
    };
    let name = if name.len() < 4 {
        format!(" {name:<3}")
    } else {
        name.to_string()
    };
    format!(
        "{record}{serial:>5} {name:<4} {res:>3} A{seq:>4}    {:>8.3}{:>8.3}{:>8.3}  1.00  0.00          {element:>2}",
        p.x, p.y, p.z
    )
}

/// Side-chain atoms used to populate random pockets: (residue, name, element).
pub const POCKET_TEMPLATES: [(&str, &str, &str); 10] = [
    ("ALA", "CB", "C"),
    ("LEU", "CD1", "C"),
    ("VAL", "CG1", "C"),
    ("PHE", "CZ", "C"),
    ("LYS", "NZ", "N"),
    ("ASN", "ND2", "N"),
    ("ASP", "OD1", "O"),
    ("SER", "OG", "O"),
    ("MET", "SD", "S"),
    ("HOH", "O", "O"),
];

pub fn random_in_ball<R: Rng>(rng: &mut R, radius: f64) -> Vec3 {
    loop {
        let p = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if p.norm_squared() <= 1.0 {
            return p * radius;
        }
    }
}

/// `n` atoms in a ball around `center`, pairwise at least `min_sep` apart
/// when feasible, one residue per atom.
pub fn random_pocket<R: Rng>(
    rng: &mut R,
    n: usize,
    radius: f64,
    center: Vec3,
    min_sep: f64,
) -> PocketStructure {
    let mut points: Vec<Vec3> = Vec::with_capacity(n);
    let mut tries = 0;
    while points.len() < n {
        let p = center + random_in_ball(rng, radius);
        tries += 1;
        if tries > 200 * n || points.iter().all(|q| (p - q).norm() >= min_sep) {
            points.push(p);
        }
    }
    let lines: Vec<String> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (res, name, el) = POCKET_TEMPLATES[rng.random_range(0..POCKET_TEMPLATES.len())];
            pdb_line(i + 1, name, res, i + 1, p, el)
        })
        .collect();
    parse_receptor(&lines.join("\n"), "random", None).unwrap()
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    let axis = random_in_ball(rng, 1.0).normalize();
    rodrigues(&(axis * rng.random_range(0.0..std::f64::consts::PI)))
}

/// Ligand rigidly rotated about its heavy centroid and moved so that the
/// centroid lands on `target`.
pub fn place_ligand(
    graph: &MolecularGraph,
    rotation: &Matrix3<f64>,
    target: Vec3,
) -> MolecularGraph {
    let c = graph.heavy_centroid().unwrap();
    let pos: Vec<Vec3> = graph
        .positions()
        .iter()
        .map(|p| rotation * (p - c) + target)
        .collect();
    graph.with_positions(&pos).unwrap()
}

pub fn transform_pocket(pocket: &PocketStructure, r: &Matrix3<f64>, t: &Vec3) -> PocketStructure {
    let mut out = pocket.clone();
    for a in &mut out.atoms {
        a.position = r * a.position + t;
    }
    out
}

pub fn transform_ligand(graph: &MolecularGraph, r: &Matrix3<f64>, t: &Vec3) -> MolecularGraph {
    let pos: Vec<Vec3> = graph.positions().iter().map(|p| r * p + t).collect();
    graph.with_positions(&pos).unwrap()
}

/// Random complex: a pocket of `n_pocket` atoms and a corpus ligand placed
/// near the pocket centre.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    ligands: &[MolecularGraph],
    n_pocket: usize,
) -> (PocketStructure, MolecularGraph) {
    let pocket = random_pocket(rng, n_pocket, 12.0, Vec3::zeros(), 2.2);
    let lig = &ligands[rng.random_range(0..ligands.len())];
    let rot = random_rotation(rng);
    let placed = place_ligand(lig, &rot, random_in_ball(rng, 3.0));
    (pocket, placed)
}
