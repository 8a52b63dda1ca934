//! Fixed-column PDB reader for receptor structures.

use std::path::Path;

use super::{Atom, AtomRole, Element, PocketStructure, ResidueInfo};
use crate::{Error, Result, Vec3};

/// Sphere used to cut a binding pocket out of a full receptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clip {
    pub center: Vec3,
    pub radius: f64,
}

const BACKBONE_NAMES: [&str; 4] = ["N", "CA", "C", "O"];

/// 1-based inclusive column range, trimmed; empty when the line is short.
fn col(line: &str, from: usize, to: usize) -> &str {
    let start = from - 1;
    if start >= line.len() {
        return "";
    }
    let end = to.min(line.len());
    line.get(start..end).unwrap_or("").trim()
}

fn col_char(line: &str, at: usize) -> char {
    line.as_bytes().get(at - 1).map_or(' ', |&b| b as char)
}

fn parse_coord(line: &str, from: usize, to: usize, lineno: usize, axis: char) -> Result<f64> {
    let field = col(line, from, to);
    let value: f64 = field.parse().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("malformed {axis} coordinate {field:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line: lineno,
            message: format!("non-finite {axis} coordinate"),
        });
    }
    Ok(value)
}

/// Element from columns 77–78, falling back to the atom name.
fn resolve_element(line: &str, hetero: bool) -> Option<Element> {
    let field = col(line, 77, 78);
    if !field.is_empty() {
        return Element::from_symbol(field);
    }
    let raw_name = line.get(12..16.min(line.len())).unwrap_or("");
    let first = raw_name.chars().next().unwrap_or(' ');
    if hetero && first.is_ascii_alphabetic() {
        if let Some(e) = raw_name.get(0..2).and_then(Element::from_symbol) {
            if e.is_metal() || e.is_halogen() {
                return Some(e);
            }
        }
    }
    raw_name
        .chars()
        .find(|c| c.is_ascii_alphabetic())
        .and_then(|c| Element::from_symbol(&c.to_string()))
}

fn parse_charge(field: &str) -> i8 {
    let bytes = field.as_bytes();
    if bytes.len() != 2 {
        return 0;
    }
    let magnitude = (bytes[0] as char).to_digit(10).unwrap_or(0) as i8;
    match bytes[1] {
        b'+' => magnitude,
        b'-' => -magnitude,
        _ => 0,
    }
}

/// Parses ATOM/HETATM records of the first model.
///
/// Alternate locations other than ' ' and 'A' are skipped. Waters and metal
/// ions are retained. With `clip`, atoms farther than the radius from the
/// centre are dropped.
pub fn parse_receptor(text: &str, source: &str, clip: Option<Clip>) -> Result<PocketStructure> {
    let mut atoms = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let record = col(line, 1, 6);
        if record == "ENDMDL" {
            break;
        }
        let hetero = match record {
            "ATOM" => false,
            "HETATM" => true,
            _ => continue,
        };
        let alt = col_char(line, 17);
        if alt != ' ' && alt != 'A' {
            continue;
        }
        let serial: i64 = col(line, 7, 11).parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("malformed serial {:?}", col(line, 7, 11)),
        })?;
        let x = parse_coord(line, 31, 38, lineno, 'x')?;
        let y = parse_coord(line, 39, 46, lineno, 'y')?;
        let z = parse_coord(line, 47, 54, lineno, 'z')?;
        let element =
            resolve_element(line, hetero).ok_or_else(|| Error::UnknownReceptorElement {
                line: lineno,
                serial,
                symbol: if col(line, 77, 78).is_empty() {
                    col(line, 13, 16).to_string()
                } else {
                    col(line, 77, 78).to_string()
                },
            })?;
        let name = col(line, 13, 16).to_string();
        let res_name = col(line, 18, 20).to_string();
        let res_seq: i32 = col(line, 23, 26).parse().unwrap_or(0);
        let mut residue = ResidueInfo {
            res_name,
            chain: col_char(line, 22),
            res_seq,
            icode: col_char(line, 27),
            backbone: false,
            hetero,
        };
        residue.backbone =
            residue.residue_code().is_some() && BACKBONE_NAMES.contains(&name.as_str());
        let position = Vec3::new(x, y, z);
        if let Some(c) = &clip {
            if (position - c.center).norm() > c.radius {
                continue;
            }
        }
        atoms.push(Atom {
            serial,
            name,
            element,
            position,
            formal_charge: parse_charge(col(line, 79, 80)),
            role: AtomRole::Receptor(residue),
        });
    }
    Ok(PocketStructure {
        atoms,
        source: source.to_string(),
        clip_center: clip.map(|c| c.center),
        clip_radius: clip.map(|c| c.radius),
    })
}

pub fn read_receptor(path: impl AsRef<Path>, clip: Option<Clip>) -> Result<PocketStructure> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_receptor(&text, &path.display().to_string(), clip)
}
