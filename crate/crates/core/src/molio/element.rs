use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Element vocabulary. The first ten entries are admissible in ligands; the
/// metals only appear on the receptor side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    H,
    C,
    N,
    O,
    F,
    P,
    S,
    Cl,
    Br,
    I,
    Zn,
    Mg,
    Ca,
    Mn,
    Fe,
    Na,
    K,
}

impl Element {
    pub const LIGAND: [Element; 10] = [
        Element::H,
        Element::C,
        Element::N,
        Element::O,
        Element::F,
        Element::P,
        Element::S,
        Element::Cl,
        Element::Br,
        Element::I,
    ];

    pub const METALS: [Element; 7] = [
        Element::Zn,
        Element::Mg,
        Element::Ca,
        Element::Mn,
        Element::Fe,
        Element::Na,
        Element::K,
    ];

    /// Case-insensitive symbol lookup ("CL", "cl" and "Cl" all resolve).
    pub fn from_symbol(symbol: &str) -> Option<Self> {
        let s = symbol.trim();
        let e = match s.to_ascii_uppercase().as_str() {
            "H" | "D" => Element::H,
            "C" => Element::C,
            "N" => Element::N,
            "O" => Element::O,
            "F" => Element::F,
            "P" => Element::P,
            "S" => Element::S,
            "CL" => Element::Cl,
            "BR" => Element::Br,
            "I" => Element::I,
            "ZN" => Element::Zn,
            "MG" => Element::Mg,
            "CA" => Element::Ca,
            "MN" => Element::Mn,
            "FE" => Element::Fe,
            "NA" => Element::Na,
            "K" => Element::K,
            _ => return None,
        };
        Some(e)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Element::H => "H",
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::F => "F",
            Element::P => "P",
            Element::S => "S",
            Element::Cl => "Cl",
            Element::Br => "Br",
            Element::I => "I",
            Element::Zn => "Zn",
            Element::Mg => "Mg",
            Element::Ca => "Ca",
            Element::Mn => "Mn",
            Element::Fe => "Fe",
            Element::Na => "Na",
            Element::K => "K",
        }
    }

    pub fn is_heavy(self) -> bool {
        self != Element::H
    }

    pub fn is_metal(self) -> bool {
        Self::METALS.contains(&self)
    }

    pub fn is_halogen(self) -> bool {
        matches!(self, Element::F | Element::Cl | Element::Br | Element::I)
    }

    /// N, O, F, P, S, Cl, Br, I: the neighbours that make a carbon non-hydrophobic.
    pub fn is_heteroatom(self) -> bool {
        matches!(
            self,
            Element::N
                | Element::O
                | Element::F
                | Element::P
                | Element::S
                | Element::Cl
                | Element::Br
                | Element::I
        )
    }

    /// Van der Waals radius in Å used by the contact energy.
    pub fn vdw_radius(self) -> f64 {
        match self {
            Element::H => 1.1,
            Element::C => 1.9,
            Element::N => 1.8,
            Element::O => 1.7,
            Element::F => 1.5,
            Element::P => 2.1,
            Element::S => 2.0,
            Element::Cl => 1.8,
            Element::Br => 2.0,
            Element::I => 2.2,
            Element::Zn
            | Element::Mg
            | Element::Ca
            | Element::Mn
            | Element::Fe
            | Element::Na
            | Element::K => 1.2,
        }
    }

    /// Index in the ligand one-hot vocabulary, if admissible in ligands.
    pub fn ligand_index(self) -> Option<usize> {
        Self::LIGAND.iter().position(|&e| e == self)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Element {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Element::from_symbol(s).ok_or_else(|| format!("unknown element {s:?}"))
    }
}
