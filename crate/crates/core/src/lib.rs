//! Non-neural core of a pocket-conditioned ligand design pipeline.
//!
//! * [`molio`]: PDB receptor and V2000 SDF ligand I/O.
//! * [`scaffold`]: Bemis–Murcko decomposition and task masks.
//! * [`energy`]: five-term empirical contact energy.
//! * [`refine`]: six-degree-of-freedom rigid-body refinement with finite-difference L-BFGS.
//! * [`ibstats`]: virtual-edge context statistics, interaction profiling and entropy estimates.
//! * [`diffsched`]: forward diffusion noising channels and loss-weight schedules.

pub mod diffsched;
pub mod energy;
mod error;
pub mod ibstats;
pub mod molio;
pub mod refine;
pub mod scaffold;

pub use error::{Error, Result};

/// Cartesian coordinates in Å.
pub type Vec3 = nalgebra::Vector3<f64>;
