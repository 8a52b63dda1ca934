//! Scaffold sets and masks over the frozen reference corpus.
//!
//! `MURCKO_ATOMS` in each record holds the heavy-atom indices (0-based, in
//! file order) of the Murcko scaffold computed by RDKit when the fixture was
//! generated; see `tests/data/gen_fixtures.py`.

use std::collections::BTreeSet;

use sbdd_core::molio::{read_sdf, MolecularGraph, SdfRecord};
use sbdd_core::scaffold::{decompose, make_mask, Task};

fn corpus() -> Vec<SdfRecord> {
    read_sdf(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/corpus.sdf"
    ))
    .unwrap()
}

fn reference(rec: &SdfRecord) -> BTreeSet<usize> {
    rec.data_value("MURCKO_ATOMS")
        .unwrap_or("")
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect()
}

fn name(g: &MolecularGraph) -> &str {
    g.name()
}

#[test]
fn scaffold_matches_reference_on_corpus() {
    let recs = corpus();
    assert!(recs.len() >= 50);
    let mut mismatches = Vec::new();
    for rec in &recs {
        let d = decompose(&rec.graph);
        let ours: BTreeSet<usize> = d.scaffold.iter().copied().collect();
        let theirs = reference(rec);
        if ours != theirs {
            mismatches.push(format!(
                "{} {}: ours {:?} reference {:?}",
                name(&rec.graph),
                rec.data_value("SMILES").unwrap_or(""),
                ours,
                theirs
            ));
        }
    }
    assert!(
        mismatches.is_empty(),
        "{} mismatches:\n{}",
        mismatches.len(),
        mismatches.join("\n")
    );
}

#[test]
fn masks_partition_heavy_atoms() {
    for rec in corpus() {
        let g = &rec.graph;
        let heavy: BTreeSet<usize> = g.heavy_indices().into_iter().collect();
        let d = decompose(g);
        for task in Task::ALL {
            let Ok(m) = make_mask(&d, task) else {
                assert!(!d.has_scaffold() && task != Task::DeNovo);
                continue;
            };
            let t: BTreeSet<usize> = m.target.iter().copied().collect();
            let c: BTreeSet<usize> = m.context.iter().copied().collect();
            assert!(t.is_disjoint(&c), "{}", g.name());
            assert_eq!(&t | &c, heavy, "{} {task}", g.name());
            if task == Task::DeNovo {
                assert!(c.is_empty());
            }
        }
    }
}

#[test]
fn scaffold_is_idempotent_and_keeps_rings() {
    for rec in corpus() {
        let g = &rec.graph;
        let d = decompose(g);
        if !d.has_scaffold() {
            continue;
        }
        let scaffold: BTreeSet<usize> = d.scaffold.iter().copied().collect();
        for sys in &d.ring_systems {
            assert!(sys.iter().all(|i| scaffold.contains(i)));
        }
        let (sub, old) = g.induced_subgraph(&d.scaffold);
        let again = decompose(&sub);
        let mapped: BTreeSet<usize> = again.scaffold.iter().map(|&k| old[k]).collect();
        assert_eq!(mapped, scaffold, "{}", g.name());
    }
}
