//! Bemis–Murcko scaffold decomposition and the SH/SC/DN task masks.
//!
//! The scaffold is every ring atom plus every linker atom joining two ring
//! systems, plus terminal atoms double-bonded to either (carbonyl oxygens and
//! the like). Everything else is side chain. Indices always refer to the
//! input graph; hydrogens belong to neither set.

mod rings;

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use rings::find_ring_systems;

use crate::molio::{BondOrder, MolecularGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub scaffold: Vec<usize>,
    pub sidechain: Vec<usize>,
    pub ring_systems: Vec<Vec<usize>>,
    pub linkers: Vec<usize>,
    /// Terminal atoms kept for a double bond to a ring or linker atom.
    pub exocyclic: Vec<usize>,
    /// Heavy atoms of every fragment other than the largest one.
    pub dropped_fragments: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn has_scaffold(&self) -> bool {
        !self.scaffold.is_empty()
    }

    pub fn heavy_count(&self) -> usize {
        self.scaffold.len() + self.sidechain.len()
    }
}

/// Decomposes the largest heavy-atom fragment of `graph`.
///
/// Acyclic input yields an empty scaffold with every heavy atom in the side
/// chain; [`make_mask`] rejects SH and SC for it.
pub fn decompose(graph: &MolecularGraph) -> Decomposition {
    let n = graph.len();
    let mut fragments = rings::heavy_fragments(graph);
    let main = if fragments.is_empty() {
        Vec::new()
    } else {
        fragments.remove(0)
    };
    let mut in_main = vec![false; n];
    for &i in &main {
        in_main[i] = true;
    }

    let ring_systems: Vec<Vec<usize>> = find_ring_systems(graph)
        .into_iter()
        .filter(|s| in_main[s[0]])
        .collect();
    let mut is_ring = vec![false; n];
    for &i in ring_systems.iter().flatten() {
        is_ring[i] = true;
    }

    let mut core = vec![false; n];
    let mut linkers = Vec::new();
    let mut exocyclic = Vec::new();
    if !ring_systems.is_empty() {
        // Peel terminal non-ring atoms until none remain.
        let mut alive = in_main.clone();
        let mut degree: Vec<usize> = (0..n)
            .map(|i| {
                if alive[i] {
                    graph.heavy_neighbors(i).count()
                } else {
                    0
                }
            })
            .collect();
        let mut queue: Vec<usize> = main
            .iter()
            .copied()
            .filter(|&i| !is_ring[i] && degree[i] <= 1)
            .collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for (w, _) in graph.heavy_neighbors(v) {
                if alive[w] {
                    degree[w] -= 1;
                    if !is_ring[w] && degree[w] <= 1 {
                        queue.push(w);
                    }
                }
            }
        }
        core = alive;
        linkers = main
            .iter()
            .copied()
            .filter(|&i| core[i] && !is_ring[i])
            .collect();
        exocyclic = main
            .iter()
            .copied()
            .filter(|&i| {
                !core[i]
                    && graph.heavy_neighbors(i).count() == 1
                    && graph
                        .heavy_neighbors(i)
                        .any(|(j, o)| core[j] && o == BondOrder::Double)
            })
            .collect();
    }

    let mut in_scaffold = core;
    for &i in &exocyclic {
        in_scaffold[i] = true;
    }
    let heavy = graph.heavy_indices();
    let scaffold = heavy.iter().copied().filter(|&i| in_scaffold[i]).collect();
    let sidechain = heavy.iter().copied().filter(|&i| !in_scaffold[i]).collect();
    Decomposition {
        scaffold,
        sidechain,
        ring_systems,
        linkers,
        exocyclic,
        dropped_fragments: fragments,
    }
}

/// Generative task: scaffold hopping, side-chain decoration, or de novo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "SH")]
    ScaffoldHopping,
    #[serde(rename = "SC")]
    SideChainDecoration,
    #[serde(rename = "DN")]
    DeNovo,
}

impl Task {
    pub const ALL: [Task; 3] = [
        Task::ScaffoldHopping,
        Task::SideChainDecoration,
        Task::DeNovo,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Task::ScaffoldHopping => "SH",
            Task::SideChainDecoration => "SC",
            Task::DeNovo => "DN",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SH" => Ok(Task::ScaffoldHopping),
            "SC" => Ok(Task::SideChainDecoration),
            "DN" => Ok(Task::DeNovo),
            _ => Err(Error::InvalidParameter(format!(
                "unknown task {s:?} (expected SH, SC or DN)"
            ))),
        }
    }
}

/// Atoms to regenerate (`target`) and atoms held fixed (`context`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaskAssignment {
    pub task: Task,
    pub target: Vec<usize>,
    pub context: Vec<usize>,
}

/// SH regenerates the scaffold, SC the side chain, DN everything.
pub fn make_mask(decomp: &Decomposition, task: Task) -> Result<MaskAssignment> {
    let (target, context) = match task {
        Task::ScaffoldHopping | Task::SideChainDecoration if !decomp.has_scaffold() => {
            return Err(Error::NoScaffold);
        }
        Task::ScaffoldHopping => (decomp.scaffold.clone(), decomp.sidechain.clone()),
        Task::SideChainDecoration => (decomp.sidechain.clone(), decomp.scaffold.clone()),
        Task::DeNovo => {
            let mut all = [decomp.scaffold.as_slice(), decomp.sidechain.as_slice()].concat();
            all.sort_unstable();
            (all, Vec::new())
        }
    };
    Ok(MaskAssignment {
        task,
        target,
        context,
    })
}

/// Tasks whose mask has a nonempty target for this decomposition.
pub fn valid_tasks(decomp: &Decomposition) -> Vec<Task> {
    Task::ALL
        .into_iter()
        .filter(|&t| make_mask(decomp, t).is_ok_and(|m| !m.target.is_empty()))
        .collect()
}

/// Draws one of the [`valid_tasks`] uniformly.
pub fn sample_mask<R: Rng + ?Sized>(decomp: &Decomposition, rng: &mut R) -> Result<MaskAssignment> {
    let tasks = valid_tasks(decomp);
    let task = *tasks
        .choose(rng)
        .ok_or(Error::Empty("ligand has no heavy atoms"))?;
    make_mask(decomp, task)
}

/// Copy of `graph` with context flags set on the mask's context atoms.
pub fn apply_mask(graph: &MolecularGraph, mask: &MaskAssignment) -> MolecularGraph {
    let mut g = graph.clone();
    g.set_context_flags(&mask.context);
    g
}
