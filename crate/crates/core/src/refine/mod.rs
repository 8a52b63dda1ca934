//! Rigid-body pose refinement against the contact energy.
//!
//! The ligand moves as a rigid body about its heavy-atom centroid. The six
//! pose parameters start at zero (the input pose) and are driven by
//! [`minimize`]; the best proposed pose replaces the input only if its energy
//! does not exceed the starting energy, so refinement never makes a pose
//! worse.

mod gradient;
mod lbfgs;
mod pose;

use nalgebra::Vector6;
use serde::Serialize;

pub use gradient::{
    central_gradient, fd_gradient, gradient_with_value, DiffScheme, DEFAULT_FD_STEP,
};
pub use lbfgs::{minimize, LbfgsParams, Minimization, TraceEntry};
pub use pose::{log_map, rodrigues, skew, RigidPose};

use crate::energy::{EnergyBreakdown, EnergyModel, ScoringLigand, ScoringPocket};
use crate::molio::{MolecularGraph, PocketStructure};
use crate::{Result, Vec3};

#[derive(Debug, Clone, Serialize)]
pub struct RefineResult {
    pub initial_pose: RigidPose,
    pub best_pose: RigidPose,
    pub e_init: f64,
    /// Lowest energy among the proposed iterates; `e_init` if none was taken.
    pub e_opt: f64,
    /// `e_opt ≤ e_init` and the run completed without an evaluation failure.
    pub accepted: bool,
    pub iterations_used: usize,
    pub converged: bool,
    /// Best-so-far energy after each iteration, nonincreasing.
    pub energy_trace: Vec<f64>,
    /// Full trace, row 0 being the starting point.
    pub trace: Vec<TraceEntry>,
    /// Breakdown of the returned pose.
    pub final_breakdown: EnergyBreakdown,
    pub failure: Option<String>,
}

impl RefineResult {
    /// `best_pose` when accepted, otherwise `initial_pose`.
    pub fn returned_pose(&self) -> &RigidPose {
        if self.accepted {
            &self.best_pose
        } else {
            &self.initial_pose
        }
    }

    /// Energy of [`RefineResult::returned_pose`].
    pub fn returned_energy(&self) -> f64 {
        if self.accepted {
            self.e_opt
        } else {
            self.e_init
        }
    }
}

/// Refines a ligand already prepared for scoring.
pub fn lbfgs_refine(
    pocket: &ScoringPocket,
    ligand: &ScoringLigand,
    model: &EnergyModel,
    params: &LbfgsParams,
) -> Result<RefineResult> {
    let center = ligand.centroid();
    let mut coords = Vec::with_capacity(ligand.len());
    let energy = |u: &Vector6<f64>| {
        RigidPose::from_params(*u, center).apply_into(ligand.positions(), &mut coords);
        Ok(model.evaluate_coords(pocket, ligand.types(), &coords).total)
    };
    let run = minimize(energy, params)?;
    Ok(assemble(run, center, pocket, ligand, model))
}

/// Convenience wrapper that types the structures with the default weights.
pub fn refine(
    pocket: &PocketStructure,
    ligand: &MolecularGraph,
    params: &LbfgsParams,
) -> Result<RefineResult> {
    let p = ScoringPocket::new(pocket)?;
    let l = ScoringLigand::new(ligand)?;
    lbfgs_refine(&p, &l, &EnergyModel::default(), params)
}

fn assemble(
    run: Minimization,
    center: Vec3,
    pocket: &ScoringPocket,
    ligand: &ScoringLigand,
    model: &EnergyModel,
) -> RefineResult {
    let initial_pose = RigidPose::from_params(run.u_init, center);
    let (best_pose, e_opt) = match run.best {
        Some((u, e)) => (RigidPose::from_params(u, center), e),
        None => (initial_pose.clone(), run.e_init),
    };
    let accepted = run.failure.is_none() && e_opt <= run.e_init;
    let energy_trace = run.trace[1..].iter().map(|t| t.best).collect();
    let returned = if accepted { &best_pose } else { &initial_pose };
    let final_breakdown = model.evaluate(pocket, ligand, returned);
    RefineResult {
        initial_pose,
        best_pose,
        e_init: run.e_init,
        e_opt,
        accepted,
        iterations_used: run.iterations,
        converged: run.converged,
        energy_trace,
        trace: run.trace,
        final_breakdown,
        failure: run.failure,
    }
}
