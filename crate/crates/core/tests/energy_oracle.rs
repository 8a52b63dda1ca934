mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sbdd_core::energy::{pair_terms, type_ligand, type_receptor, AtomType, DEFAULT_WEIGHTS};
use sbdd_core::molio::{read_ligand, read_receptor, Element, MolecularGraph, PocketStructure};
use sbdd_core::refine::RigidPose;
use sbdd_core::Vec3;

use common::*;

const W: [f64; 5] = [-0.035579, -0.005156, 0.840245, -0.035069, -0.587439];

fn radius(e: Element) -> f64 {
    match e {
        Element::C => 1.9,
        Element::N => 1.8,
        Element::O => 1.7,
        Element::F => 1.5,
        Element::P => 2.1,
        Element::S => 2.0,
        Element::Cl => 1.8,
        Element::Br => 2.0,
        Element::I => 2.2,
        other => panic!("no radius for {other}"),
    }
}

fn ramp(d: f64, full: f64, zero: f64) -> f64 {
    if d <= full {
        1.0
    } else if d >= zero {
        0.0
    } else {
        (zero - d) / (zero - full)
    }
}

/// Straight-line pair energy: five terms written out from their definitions.
fn oracle_pair(r: f64, a: &AtomType, b: &AtomType) -> [f64; 5] {
    if r >= 8.0 {
        return [0.0; 5];
    }
    let d = r - a.vdw_radius - b.vdw_radius;
    let gauss1 = (-(d / 0.5) * (d / 0.5)).exp();
    let gauss2 = (-((d - 3.0) / 2.0) * ((d - 3.0) / 2.0)).exp();
    let repulsion = if d < 0.0 { d * d } else { 0.0 };
    let hydrophobic = if a.hydrophobic && b.hydrophobic {
        ramp(d, 0.5, 1.5)
    } else {
        0.0
    };
    let paired = (a.donor && b.acceptor) || (a.acceptor && b.donor);
    let hbond = if paired { ramp(d, -0.7, 0.0) } else { 0.0 };
    [gauss1, gauss2, repulsion, hydrophobic, hbond]
}

fn oracle_energy(pocket: &PocketStructure, lig: &MolecularGraph, pose: &RigidPose) -> f64 {
    let (ptypes, _) = type_receptor(pocket);
    let ltypes = type_ligand(lig);
    let mut total = 0.0;
    for (i, la) in lig.atoms().iter().enumerate() {
        if la.element == Element::H {
            continue;
        }
        let x = pose.apply_point(&la.position);
        for (j, pa) in pocket.atoms.iter().enumerate() {
            if pa.element == Element::H || pa.is_water() {
                continue;
            }
            let terms = oracle_pair((x - pa.position).norm(), &ltypes[i], &ptypes[j]);
            total += terms.iter().zip(W).map(|(t, w)| t * w).sum::<f64>();
        }
    }
    total
}

fn random_type<R: Rng>(rng: &mut R) -> AtomType {
    let e = [
        Element::C,
        Element::N,
        Element::O,
        Element::S,
        Element::F,
        Element::Cl,
        Element::Br,
        Element::I,
    ][rng.random_range(0..8)];
    AtomType {
        vdw_radius: radius(e),
        hydrophobic: rng.random_bool(0.5),
        donor: rng.random_bool(0.3),
        acceptor: rng.random_bool(0.3),
    }
}

#[test]
fn weights_are_the_published_constants() {
    assert_eq!(DEFAULT_WEIGHTS, W);
}

#[test]
fn pair_terms_match_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (a, b) = (random_type(&mut rng), random_type(&mut rng));
        let r = rng.random_range(0.0..7.999);
        let d = r - a.vdw_radius - b.vdw_radius;
        let got = pair_terms(d, &a, &b);
        let want = oracle_pair(r, &a, &b);
        for k in 0..5 {
            assert!(
                (got[k] - want[k]).abs() < 1e-12,
                "term {k} at r = {r}: {got:?} vs {want:?}"
            );
        }
    }
}

#[test]
fn pair_terms_are_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let (a, b) = (random_type(&mut rng), random_type(&mut rng));
        let d = rng.random_range(-3.0..4.0);
        assert_eq!(pair_terms(d, &a, &b), pair_terms(d, &b, &a));
    }
}

#[test]
fn repulsion_grows_monotonically_with_overlap() {
    let c = AtomType::plain(Element::C);
    let mut previous = f64::INFINITY;
    for k in 0..=400 {
        let d = -4.0 + k as f64 * 0.01;
        let rep = pair_terms(d, &c, &c)[2];
        assert!(rep <= previous);
        previous = rep;
    }
    assert_eq!(pair_terms(0.0, &c, &c)[2], 0.0);
}

#[test]
fn aspirin_typing_table() {
    let g = read_ligand(data_path("aspirin.sdf")).unwrap();
    assert_eq!(g.heavy_count(), 13);
    let t = type_ligand(&g);
    // (hydrophobic, donor, acceptor) per atom in file order.
    let expected = [
        (true, false, false),  // methyl C
        (false, false, false), // ester carbonyl C
        (false, false, true),  // ester carbonyl O
        (false, false, true),  // ester O
        (false, false, false), // aromatic C–O
        (true, false, false),
        (true, false, false),
        (true, false, false),
        (true, false, false),
        (true, false, false),  // aromatic C bearing the acid
        (false, false, false), // acid C
        (false, false, true),  // acid carbonyl O
        (false, true, true),   // acid hydroxyl O
    ];
    for (i, (h, d, a)) in expected.iter().enumerate() {
        assert_eq!(
            (t[i].hydrophobic, t[i].donor, t[i].acceptor),
            (*h, *d, *a),
            "atom {i}"
        );
        assert_eq!(t[i].vdw_radius, radius(g.atoms()[i].element));
    }
}

#[test]
fn peptide_receptor_typing() {
    let p = read_receptor(data_path("peptide5.pdb"), None).unwrap();
    let (t, report) = type_receptor(&p);
    assert_eq!(report.unknown_templates, 0);
    let find = |res: &str, name: &str| {
        p.atoms
            .iter()
            .position(|a| a.name == name && a.residue().map(|r| r.res_name.as_str()) == Some(res))
            .unwrap()
    };
    let flags = |i: usize| (t[i].hydrophobic, t[i].donor, t[i].acceptor);
    assert_eq!(flags(find("ALA", "CB")), (true, false, false));
    assert_eq!(flags(find("ALA", "CA")), (false, false, false));
    assert_eq!(flags(find("CYS", "CB")), (false, false, false));
    assert_eq!(flags(find("ASP", "OD1")), (false, false, true));
    assert_eq!(flags(find("GLU", "N")), (false, true, false));
    assert_eq!(flags(find("PHE", "CZ")), (true, false, false));
    assert_eq!(flags(find("PHE", "OXT")), (false, false, true));
}

#[test]
fn full_energy_matches_the_oracle() {
    let ligands = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let n = rng.random_range(20..120);
        let (pocket, lig) = random_complex(&mut rng, &ligands, n);
        let center = lig.heavy_centroid().unwrap();
        let u = nalgebra::Vector6::from_fn(|_, _| rng.random_range(-0.4..0.4));
        let pose = RigidPose::from_params(u, center);
        let got = sbdd_core::energy::evaluate(&pocket, &lig, &pose)
            .unwrap()
            .total;
        let want = oracle_energy(&pocket, &lig, &pose);
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1.0),
            "{got} vs {want}"
        );
    }
}

#[test]
fn thirty_atom_complex_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let pocket = random_pocket(&mut rng, 30, 7.0, Vec3::zeros(), 2.0);
    let lig = read_ligand(data_path("aspirin.sdf")).unwrap();
    let lig = place_ligand(&lig, &random_rotation(&mut rng), Vec3::new(0.5, 0.0, 0.0));
    let pose = RigidPose::identity(lig.heavy_centroid().unwrap());
    let cell = sbdd_core::energy::evaluate(&pocket, &lig, &pose).unwrap();
    let brute = sbdd_core::energy::evaluate_brute_force(&pocket, &lig, &pose).unwrap();
    assert_eq!(cell.pair_count, brute.pair_count);
    assert!((cell.total - brute.total).abs() <= 1e-12 * brute.total.abs().max(1.0));
    assert!(
        (cell.total - oracle_energy(&pocket, &lig, &pose)).abs()
            <= 1e-9 * cell.total.abs().max(1.0)
    );
}
