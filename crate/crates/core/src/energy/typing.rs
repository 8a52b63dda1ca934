//! Per-atom chemical typing for the contact energy and interaction rules.

use log::warn;
use serde::Serialize;

use crate::molio::{Atom, Element, MolecularGraph, PocketStructure};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomType {
    pub vdw_radius: f64,
    pub hydrophobic: bool,
    pub donor: bool,
    pub acceptor: bool,
}

impl AtomType {
    pub fn plain(element: Element) -> Self {
        AtomType {
            vdw_radius: element.vdw_radius(),
            hydrophobic: false,
            donor: false,
            acceptor: false,
        }
    }

    pub fn hbond_pair(&self, other: &AtomType) -> bool {
        (self.donor && other.acceptor) || (self.acceptor && other.donor)
    }
}

/// Counters for atoms whose template was unknown.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TypingReport {
    pub unknown_templates: usize,
}

fn default_valence(e: Element) -> Option<f64> {
    match e {
        Element::C => Some(4.0),
        Element::N => Some(3.0),
        Element::O => Some(2.0),
        Element::S => Some(2.0),
        Element::P => Some(3.0),
        _ => None,
    }
}

/// Hydrogens on atom `i`: explicit neighbours when the graph carries any
/// hydrogens, otherwise the valence deficit of the heavy-atom bonds.
pub fn hydrogen_count(graph: &MolecularGraph, i: usize, explicit_h: bool) -> usize {
    if explicit_h {
        return graph
            .neighbors(i)
            .iter()
            .filter(|&&(j, _)| graph.atoms()[j].element == Element::H)
            .count();
    }
    let atom = &graph.atoms()[i];
    let Some(valence) = default_valence(atom.element) else {
        return 0;
    };
    // Cationic N/O gain a bond; anions lose one.
    let valence = valence
        + f64::from(atom.formal_charge)
            * if atom.element == Element::C {
                -1.0
            } else {
                1.0
            };
    let used: f64 = graph.neighbors(i).iter().map(|&(_, o)| o.valence()).sum();
    (valence - used).round().max(0.0) as usize
}

/// Types every atom of a ligand graph (hydrogens get a plain type).
///
/// * hydrophobic: carbon with no N, O, F, P, S, Cl, Br or I neighbour;
/// * donor: N or O carrying at least one hydrogen;
/// * acceptor: any O, or an N without hydrogens, without positive charge and
///   with at most two heavy neighbours (pyridine, imine, nitrile nitrogens).
pub fn type_ligand(graph: &MolecularGraph) -> Vec<AtomType> {
    let explicit_h = graph.atoms().iter().any(|a| a.element == Element::H);
    graph
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut t = AtomType::plain(a.element);
            match a.element {
                Element::C => {
                    t.hydrophobic = !graph
                        .neighbors(i)
                        .iter()
                        .any(|&(j, _)| graph.atoms()[j].element.is_heteroatom());
                }
                Element::N | Element::O => {
                    let h = hydrogen_count(graph, i, explicit_h);
                    t.donor = h > 0;
                    t.acceptor = if a.element == Element::O {
                        true
                    } else {
                        h == 0 && a.formal_charge <= 0 && graph.heavy_neighbors(i).count() <= 2
                    };
                }
                _ => {}
            }
            t
        })
        .collect()
}

/// Carbons bonded to a heteroatom in the standard residue templates
/// (backbone CA and C are handled separately).
fn polar_carbon(res: &str, name: &str) -> bool {
    matches!(
        (res, name),
        ("ARG", "CD" | "CZ")
            | ("ASN", "CG")
            | ("ASP", "CG")
            | ("CYS", "CB")
            | ("GLN", "CD")
            | ("GLU", "CD")
            | ("HIS", "CG" | "CD2" | "CE1")
            | ("LYS", "CE")
            | ("MET", "CG" | "CE")
            | ("PRO", "CD")
            | ("SER", "CB")
            | ("THR", "CB")
            | ("TRP", "CD1" | "CE2")
            | ("TYR", "CZ")
    )
}

fn template_donor(res: &str, name: &str) -> bool {
    match name {
        "N" => res != "PRO",
        _ => matches!(
            (res, name),
            ("ARG", "NE" | "NH1" | "NH2")
                | ("ASN", "ND2")
                | ("GLN", "NE2")
                | ("HIS", "ND1" | "NE2")
                | ("LYS", "NZ")
                | ("SER", "OG")
                | ("THR", "OG1")
                | ("TYR", "OH")
                | ("TRP", "NE1")
        ),
    }
}

fn template_acceptor(res: &str, name: &str) -> bool {
    match name {
        "O" | "OXT" => true,
        _ => matches!(
            (res, name),
            ("ASP", "OD1" | "OD2")
                | ("GLU", "OE1" | "OE2")
                | ("ASN", "OD1")
                | ("GLN", "OE1")
                | ("HIS", "ND1" | "NE2")
                | ("SER", "OG")
                | ("THR", "OG1")
                | ("TYR", "OH")
        ),
    }
}

const COVALENT_CUTOFF: f64 = 1.9;

/// Types receptor atoms from residue templates.
///
/// Waters are donor and acceptor. Carbons of non-standard residues are typed
/// from geometric adjacency within the residue; their N/O atoms fall back to
/// non-donor, non-acceptor and are counted in the report.
pub fn type_receptor(pocket: &PocketStructure) -> (Vec<AtomType>, TypingReport) {
    let mut report = TypingReport::default();
    let atoms = &pocket.atoms;
    let types = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut t = AtomType::plain(a.element);
            let Some(res) = a.residue() else { return t };
            if res.is_water() {
                if a.element == Element::O {
                    t.donor = true;
                    t.acceptor = true;
                }
                return t;
            }
            let standard = res.residue_code().is_some();
            match a.element {
                Element::C if standard => {
                    let backbone_polar = a.name == "CA" || a.name == "C";
                    t.hydrophobic = !backbone_polar && !polar_carbon(&res.res_name, &a.name);
                }
                Element::C => {
                    t.hydrophobic = !geometric_hetero_neighbor(atoms, i, a);
                }
                Element::N | Element::O if standard => {
                    t.donor = template_donor(&res.res_name, &a.name);
                    t.acceptor = template_acceptor(&res.res_name, &a.name);
                }
                Element::N | Element::O => {
                    report.unknown_templates += 1;
                }
                _ => {}
            }
            t
        })
        .collect();
    if report.unknown_templates > 0 {
        warn!(
            "{}: {} N/O atoms in non-standard residues typed as neither donor nor acceptor",
            pocket.source, report.unknown_templates
        );
    }
    (types, report)
}

fn geometric_hetero_neighbor(atoms: &[Atom], i: usize, a: &Atom) -> bool {
    let res = a.residue();
    atoms.iter().enumerate().any(|(j, b)| {
        j != i
            && b.element.is_heteroatom()
            && match (res, b.residue()) {
                (Some(r1), Some(r2)) => r1.same_residue(r2),
                _ => false,
            }
            && (a.position - b.position).norm() <= COVALENT_CUTOFF
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molio::{parse_ligand, parse_receptor};

    #[test]
    fn water_is_donor_and_acceptor() {
        let line = "HETATM    1  O   HOH A 101       0.000   0.000   0.000  1.00  0.00           O";
        let p = parse_receptor(line, "w", None).unwrap();
        let (t, r) = type_receptor(&p);
        assert!(t[0].donor && t[0].acceptor && !t[0].hydrophobic);
        assert_eq!(r.unknown_templates, 0);
    }

    #[test]
    fn backbone_and_side_chain_templates() {
        let text = "\
ATOM      1  N   SER A   1       0.000   0.000   0.000  1.00  0.00           N
ATOM      2  CA  SER A   1       1.450   0.000   0.000  1.00  0.00           C
ATOM      3  C   SER A   1       2.000   1.400   0.000  1.00  0.00           C
ATOM      4  O   SER A   1       1.300   2.400   0.000  1.00  0.00           O
ATOM      5  CB  SER A   1       2.000  -0.800   1.200  1.00  0.00           C
ATOM      6  OG  SER A   1       3.400  -0.800   1.200  1.00  0.00           O
ATOM      7  CB  ALA A   2       9.000   0.000   0.000  1.00  0.00           C
";
        let p = parse_receptor(text, "s", None).unwrap();
        let (t, _) = type_receptor(&p);
        assert!(t[0].donor && !t[0].acceptor);
        assert!(!t[1].hydrophobic && !t[2].hydrophobic);
        assert!(t[3].acceptor && !t[3].donor);
        assert!(!t[4].hydrophobic);
        assert!(t[5].donor && t[5].acceptor);
        assert!(t[6].hydrophobic);
    }

    #[test]
    fn unknown_residue_counted() {
        let text = "\
HETATM    1  C1  LIG A   1       0.000   0.000   0.000  1.00  0.00           C
HETATM    2  O1  LIG A   1       1.400   0.000   0.000  1.00  0.00           O
HETATM    3  C2  LIG A   1       5.000   0.000   0.000  1.00  0.00           C
";
        let p = parse_receptor(text, "u", None).unwrap();
        let (t, r) = type_receptor(&p);
        assert_eq!(r.unknown_templates, 1);
        assert!(!t[0].hydrophobic);
        assert!(t[2].hydrophobic);
        assert!(!t[1].donor && !t[1].acceptor);
    }

    #[test]
    fn implicit_hydrogens_from_valence() {
        // Methylamine and trimethylamine without explicit hydrogens.
        let text = "\
x
  t

  5  4  0  0  0  0  0  0  0  0999 V2000
    0.0000    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0
    1.4700    0.0000    0.0000 N   0  0  0  0  0  0  0  0  0  0  0  0
    2.0000    1.3000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0
    2.0000   -1.3000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0
    5.0000    0.0000    0.0000 O   0  0  0  0  0  0  0  0  0  0  0  0
  1  2  1  0
  2  3  1  0
  2  4  1  0
  4  5  2  0
M  END
";
        let g = parse_ligand(text).unwrap();
        let t = type_ligand(&g);
        assert!(!t[1].donor, "tertiary N has no hydrogen");
        assert!(!t[1].acceptor, "three heavy neighbours");
        assert!(!t[4].donor && t[4].acceptor, "carbonyl O");
        assert!(!t[0].hydrophobic && !t[3].hydrophobic);
    }
}
