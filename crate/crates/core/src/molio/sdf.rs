//! V2000 MOL/SDF reading and writing.

use std::fmt::Write as _;
use std::path::Path;

use super::{Atom, Bond, BondOrder, Element, MolecularGraph};
use crate::refine::RigidPose;
use crate::{Error, Result, Vec3};

/// One SDF record: the molecule plus its `> <KEY>` data items in file order.
#[derive(Debug, Clone)]
pub struct SdfRecord {
    pub graph: MolecularGraph,
    pub data: Vec<(String, String)>,
}

impl SdfRecord {
    pub fn data_value(&self, key: &str) -> Option<&str> {
        self.data
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Iterator over the records of a multi-record SDF text.
pub struct SdfReader<'a> {
    lines: Vec<&'a str>,
    cursor: usize,
}

impl<'a> SdfReader<'a> {
    pub fn new(text: &'a str) -> Self {
        SdfReader {
            lines: text.lines().collect(),
            cursor: 0,
        }
    }
}

impl Iterator for SdfReader<'_> {
    type Item = Result<SdfRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        // Skip blank separators between records.
        while self.cursor < self.lines.len() && self.lines[self.cursor].trim().is_empty() {
            self.cursor += 1;
        }
        if self.cursor >= self.lines.len() {
            return None;
        }
        let start = self.cursor;
        let mut end = start;
        while end < self.lines.len() && self.lines[end].trim_end() != "$$$$" {
            end += 1;
        }
        self.cursor = end + 1;
        Some(parse_record(&self.lines[start..end], start))
    }
}

fn field(line: &str, from: usize, to: usize) -> &str {
    if from >= line.len() {
        return "";
    }
    line.get(from..to.min(line.len())).unwrap_or("").trim()
}

fn looks_like_bond(line: &str) -> bool {
    [(0, 3), (3, 6), (6, 9)]
        .iter()
        .all(|&(a, b)| field(line, a, b).parse::<usize>().is_ok())
}

fn looks_like_atom(line: &str) -> bool {
    let toks: Vec<&str> = line.split_whitespace().collect();
    toks.len() >= 4
        && toks
            .iter()
            .take(3)
            .all(|t| t.contains('.') && t.parse::<f64>().is_ok())
}

fn charge_from_code(code: i32) -> i8 {
    match code {
        1 => 3,
        2 => 2,
        3 => 1,
        5 => -1,
        6 => -2,
        7 => -3,
        _ => 0,
    }
}

fn parse_atom_line(line: &str, lineno: usize) -> Result<(Vec3, String, i8)> {
    let fixed = (
        field(line, 0, 10).parse::<f64>(),
        field(line, 10, 20).parse::<f64>(),
        field(line, 20, 30).parse::<f64>(),
    );
    let (x, y, z, symbol, code) = match fixed {
        (Ok(x), Ok(y), Ok(z)) => {
            let code = field(line, 36, 39).parse::<i32>().unwrap_or(0);
            (x, y, z, field(line, 31, 34).to_string(), code)
        }
        _ => {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parse = |t: Option<&&str>| t.and_then(|s| s.parse::<f64>().ok());
            match (
                parse(toks.first()),
                parse(toks.get(1)),
                parse(toks.get(2)),
                toks.get(3),
            ) {
                (Some(x), Some(y), Some(z), Some(sym)) => {
                    let code = toks.get(5).and_then(|s| s.parse().ok()).unwrap_or(0);
                    (x, y, z, sym.to_string(), code)
                }
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("malformed atom line {line:?}"),
                    })
                }
            }
        }
    };
    if ![x, y, z].iter().all(|c| c.is_finite()) {
        return Err(Error::Parse {
            line: lineno,
            message: "non-finite coordinate".into(),
        });
    }
    Ok((Vec3::new(x, y, z), symbol, charge_from_code(code)))
}

fn parse_record(lines: &[&str], offset: usize) -> Result<SdfRecord> {
    let lineno = |i: usize| offset + i + 1;
    if lines.len() < 4 {
        return Err(Error::Parse {
            line: lineno(lines.len()),
            message: "truncated MOL header".into(),
        });
    }
    let name = lines[0].trim().to_string();
    let counts = lines[3];
    if counts.contains("V3000") {
        return Err(Error::Parse {
            line: lineno(3),
            message: "V3000 connection tables are not supported".into(),
        });
    }
    let parse_count = |s: &str, what: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse {
            line: lineno(3),
            message: format!("malformed {what} count in counts line {counts:?}"),
        })
    };
    let n_atoms = parse_count(field(counts, 0, 3), "atom")?;
    let n_bonds = parse_count(field(counts, 3, 6), "bond")?;

    let mut atoms = Vec::with_capacity(n_atoms);
    for k in 0..n_atoms {
        let i = 4 + k;
        let line = match lines.get(i) {
            Some(l) if looks_like_atom(l) || (!l.starts_with("M  ") && !looks_like_bond(l)) => *l,
            _ => {
                return Err(Error::CountsMismatch {
                    what: "atoms",
                    declared: n_atoms,
                    found: k,
                })
            }
        };
        let (position, symbol, charge) = parse_atom_line(line, lineno(i))?;
        let element = Element::from_symbol(&symbol)
            .filter(|e| e.ligand_index().is_some())
            .ok_or_else(|| Error::UnknownLigandElement {
                line: lineno(i),
                symbol: symbol.clone(),
            })?;
        let mut atom = Atom::ligand(k as i64 + 1, element, position);
        atom.formal_charge = charge;
        atoms.push(atom);
    }

    let mut bonds = Vec::with_capacity(n_bonds);
    for k in 0..n_bonds {
        let i = 4 + n_atoms + k;
        let line = match lines.get(i) {
            Some(l) if looks_like_bond(l) && !looks_like_atom(l) => *l,
            Some(l) if looks_like_atom(l) => {
                return Err(Error::CountsMismatch {
                    what: "atoms",
                    declared: n_atoms,
                    found: n_atoms + 1,
                })
            }
            _ => {
                return Err(Error::CountsMismatch {
                    what: "bonds",
                    declared: n_bonds,
                    found: k,
                })
            }
        };
        let a: usize = field(line, 0, 3).parse().unwrap_or(0);
        let b: usize = field(line, 3, 6).parse().unwrap_or(0);
        let code: u8 = field(line, 6, 9).parse().unwrap_or(0);
        let order = BondOrder::from_code(code).ok_or_else(|| Error::Parse {
            line: lineno(i),
            message: format!("unsupported bond order {code}"),
        })?;
        if a == 0 || b == 0 {
            return Err(Error::Parse {
                line: lineno(i),
                message: format!("malformed bond line {line:?}"),
            });
        }
        bonds.push(Bond {
            i: a - 1,
            j: b - 1,
            order,
        });
    }

    let mut i = 4 + n_atoms + n_bonds;
    let mut charges: Option<Vec<(usize, i8)>> = None;
    while i < lines.len() {
        let line = lines[i];
        if line.starts_with("M  END") {
            i += 1;
            break;
        }
        if let Some(rest) = line.strip_prefix("M  CHG") {
            let toks: Vec<i64> = rest
                .split_whitespace()
                .filter_map(|t| t.parse().ok())
                .collect();
            let list = charges.get_or_insert_with(Vec::new);
            for pair in toks.get(1..).unwrap_or(&[]).chunks(2) {
                if let [idx, chg] = pair {
                    list.push((*idx as usize - 1, *chg as i8));
                }
            }
        } else if looks_like_atom(line) {
            return Err(Error::CountsMismatch {
                what: "atoms",
                declared: n_atoms,
                found: n_atoms + 1,
            });
        } else if looks_like_bond(line) {
            return Err(Error::CountsMismatch {
                what: "bonds",
                declared: n_bonds,
                found: n_bonds + 1,
            });
        }
        i += 1;
    }
    // M  CHG supersedes the atom-block charge column.
    if let Some(list) = charges {
        for a in &mut atoms {
            a.formal_charge = 0;
        }
        for (idx, chg) in list {
            if let Some(a) = atoms.get_mut(idx) {
                a.formal_charge = chg;
            }
        }
    }

    let mut data = Vec::new();
    while i < lines.len() {
        let line = lines[i];
        i += 1;
        if !line.starts_with('>') {
            continue;
        }
        let key = match (line.find('<'), line.rfind('>')) {
            (Some(a), Some(b)) if b > a => line[a + 1..b].to_string(),
            _ => continue,
        };
        let mut value = Vec::new();
        while i < lines.len() && !lines[i].trim().is_empty() {
            value.push(lines[i]);
            i += 1;
        }
        data.push((key, value.join("\n")));
    }

    let graph = MolecularGraph::new(name, atoms, bonds)?;
    Ok(SdfRecord { graph, data })
}

/// First record of a MOL/SDF text.
pub fn parse_ligand(text: &str) -> Result<MolecularGraph> {
    SdfReader::new(text)
        .next()
        .unwrap_or_else(|| {
            Err(Error::Parse {
                line: 1,
                message: "no MOL record found".into(),
            })
        })
        .map(|r| r.graph)
}

pub fn read_ligand(path: impl AsRef<Path>) -> Result<MolecularGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_ligand(&text)
}

pub fn read_sdf(path: impl AsRef<Path>) -> Result<Vec<SdfRecord>> {
    let text = std::fs::read_to_string(path)?;
    SdfReader::new(&text).collect()
}

fn charge_code(charge: i8) -> u8 {
    match charge {
        3 => 1,
        2 => 2,
        1 => 3,
        -1 => 5,
        -2 => 6,
        -3 => 7,
        _ => 0,
    }
}

/// Serializes one SDF record, applying `pose` to every atom first.
///
/// Coordinates are written with four decimals, so a parse of the output
/// reproduces them to 1e-4 Å.
pub fn write_ligand(
    graph: &MolecularGraph,
    pose: Option<&RigidPose>,
    annotations: &[(String, String)],
) -> String {
    let mut out = String::new();
    let positions = match pose {
        Some(p) => p.apply(&graph.positions()),
        None => graph.positions(),
    };
    let _ = writeln!(out, "{}", graph.name());
    let _ = writeln!(out, "  sbdd          3D");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>3}{:>3}  0  0  0  0  0  0  0  0999 V2000",
        graph.len(),
        graph.bonds().len()
    );
    for (a, p) in graph.atoms().iter().zip(&positions) {
        let _ = writeln!(
            out,
            "{:>10.4}{:>10.4}{:>10.4} {:<3} 0{:>3}  0  0  0  0  0  0  0  0  0  0",
            p.x,
            p.y,
            p.z,
            a.element.symbol(),
            charge_code(a.formal_charge)
        );
    }
    for b in graph.bonds() {
        let _ = writeln!(out, "{:>3}{:>3}{:>3}  0", b.i + 1, b.j + 1, b.order.code());
    }
    let charged: Vec<(usize, i8)> = graph
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.formal_charge != 0)
        .map(|(i, a)| (i, a.formal_charge))
        .collect();
    for chunk in charged.chunks(8) {
        let _ = write!(out, "M  CHG{:>3}", chunk.len());
        for (i, c) in chunk {
            let _ = write!(out, " {:>3} {:>3}", i + 1, c);
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(out, "M  END");
    for (k, v) in annotations {
        let _ = writeln!(out, "> <{k}>");
        let _ = writeln!(out, "{v}");
        let _ = writeln!(out);
    }
    let _ = writeln!(out, "$$$$");
    out
}
