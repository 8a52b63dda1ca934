//! Context statistics of a pocket–ligand complex.
//!
//! Virtual edges join pocket and ligand heavy atoms closer than 6 Å.
//! Together with geometric interaction rules they give the summary
//! `Z = (n̄, d̄, t̄, k̄)` of the atoms a task keeps as context. Over a corpus,
//! `ρ = Ĥ(Z)/4` uses a k-nearest-neighbour entropy estimate. The gradient
//! SNR helpers analyze externally recorded training gradients.

mod aromatic;
mod edges;
mod entropy;
mod gsnr;
mod hexbin;
mod interactions;
mod summary;

pub use aromatic::{
    ligand_aromatic_rings, plane_rms, pocket_aromatic_rings, AromaticRing, PLANARITY_TOLERANCE,
};
pub use edges::{build_virtual_edges, VirtualEdge, VirtualEdgeGraph, DEFAULT_EDGE_THRESHOLD};
pub use entropy::{
    information_density, kl_entropy, ln_unit_ball_volume, AxisMeans, DensityReport,
    EntropyEstimate, Hexbins, DEFAULT_NEIGHBORS, JITTER, LATENT_DIMENSION, MIN_CONFIDENT_SAMPLES,
};
pub use gsnr::{gradient_snr, GsnrReport, WindowSnr, SNR_FLOOR};
pub use hexbin::{hexbin, HexBin, DEFAULT_GRIDSIZE};
pub use interactions::{
    aromatic_rings, classify_interactions, InteractionCategory, InteractionRecord,
    InteractionThresholds,
};
pub use summary::{summarize, summarize_records, tally_set, ContextSummary};
