//! Fixed-step L-BFGS over the six pose parameters with finite-difference
//! gradients.
//!
//! There is no line search: every iteration moves `u ← u − step · H g`,
//! where `H g` comes from the two-loop recursion over the stored curvature
//! pairs. The caller decides what to do with the best iterate.

use std::collections::VecDeque;

use nalgebra::Vector6;
use serde::{Deserialize, Serialize};

use super::gradient::{gradient_with_value, DiffScheme, DEFAULT_FD_STEP};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbfgsParams {
    /// Iteration budget (the `--epochs` argument).
    pub max_iterations: usize,
    /// Constant multiplier on the search direction.
    pub step: f64,
    /// Number of stored (s, y) pairs.
    pub memory: usize,
    pub fd_step: f64,
    pub scheme: DiffScheme,
    /// Stop once the max-norm of the gradient falls below this.
    pub gradient_tolerance: f64,
    /// Pairs with `sᵀy` at or below this are skipped.
    pub curvature_threshold: f64,
}

impl Default for LbfgsParams {
    fn default() -> Self {
        LbfgsParams {
            max_iterations: 100,
            step: 0.1,
            memory: 5,
            fd_step: DEFAULT_FD_STEP,
            scheme: DiffScheme::Forward,
            gradient_tolerance: 1e-6,
            curvature_threshold: 1e-10,
        }
    }
}

impl LbfgsParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad(format!("step must be positive, got {}", self.step));
        }
        if self.memory == 0 {
            return bad("memory must be at least 1".into());
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return bad(format!(
                "finite-difference step must be positive, got {}",
                self.fd_step
            ));
        }
        if self.gradient_tolerance < 0.0 {
            return bad("gradient tolerance must be non-negative".into());
        }
        Ok(())
    }
}

/// One row of the optimization trace. Row 0 is the starting point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub energy: f64,
    /// Lowest energy among iterates 1..=iteration (row 0 carries the start).
    pub best: f64,
}

#[derive(Debug, Clone)]
pub struct Minimization {
    pub u_init: Vector6<f64>,
    pub e_init: f64,
    /// Best iterate proposed by the optimizer, excluding the start; `None`
    /// when no step was taken.
    pub best: Option<(Vector6<f64>, f64)>,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceEntry>,
    /// Set when an energy evaluation failed mid-run; the trace is partial.
    pub failure: Option<String>,
}

struct CurvatureMemory {
    pairs: VecDeque<(Vector6<f64>, Vector6<f64>, f64)>,
    capacity: usize,
}

impl CurvatureMemory {
    fn new(capacity: usize) -> Self {
        CurvatureMemory {
            pairs: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    fn push(&mut self, s: Vector6<f64>, y: Vector6<f64>, threshold: f64) -> bool {
        let sy = s.dot(&y);
        if sy <= threshold {
            return false;
        }
        if self.pairs.len() == self.capacity {
            self.pairs.pop_front();
        }
        self.pairs.push_back((s, y, 1.0 / sy));
        true
    }

    /// Two-loop recursion: approximates `H g` for the inverse Hessian `H`.
    /// With no stored pairs this is `g` itself (steepest descent).
    fn direction(&self, g: &Vector6<f64>) -> Vector6<f64> {
        let mut q = *g;
        let mut alphas = [0.0; 64];
        for (k, (s, y, rho)) in self.pairs.iter().enumerate().rev() {
            let a = rho * s.dot(&q);
            alphas[k] = a;
            q -= a * y;
        }
        let gamma = match self.pairs.back() {
            Some((s, y, _)) => s.dot(y) / y.norm_squared(),
            None => 1.0,
        };
        let mut r = gamma * q;
        for (k, (s, y, rho)) in self.pairs.iter().enumerate() {
            let b = rho * y.dot(&r);
            r += s * (alphas[k] - b);
        }
        r
    }
}

/// Minimizes `energy` starting from `u = 0`.
///
/// Fails only if the starting energy cannot be evaluated; later failures
/// stop the run and are reported in [`Minimization::failure`].
pub fn minimize<F>(mut energy: F, params: &LbfgsParams) -> Result<Minimization>
where
    F: FnMut(&Vector6<f64>) -> Result<f64>,
{
    params.validate()?;
    if params.memory > 64 {
        return Err(Error::InvalidParameter(
            "memory is capped at 64 pairs".into(),
        ));
    }
    let u_init = Vector6::zeros();
    let e_init = energy(&u_init)?;
    if !e_init.is_finite() {
        return Err(Error::NonFiniteEnergy { probe: 0 });
    }

    let mut out = Minimization {
        u_init,
        e_init,
        best: None,
        iterations: 0,
        converged: false,
        trace: vec![TraceEntry {
            iteration: 0,
            energy: e_init,
            best: e_init,
        }],
        failure: None,
    };

    let mut memory = CurvatureMemory::new(params.memory);
    let mut u = u_init;
    let mut e = e_init;
    let mut previous: Option<(Vector6<f64>, Vector6<f64>)> = None;

    for k in 0..params.max_iterations {
        let g = match gradient_with_value(&mut energy, &u, e, params.fd_step, params.scheme) {
            Ok(g) => g,
            Err(err) => {
                out.failure = Some(err.to_string());
                break;
            }
        };
        if let Some((u_prev, g_prev)) = previous {
            memory.push(u - u_prev, g - g_prev, params.curvature_threshold);
        }
        if g.amax() < params.gradient_tolerance {
            out.converged = true;
            break;
        }
        let d = memory.direction(&g);
        previous = Some((u, g));
        u -= params.step * d;
        e = match energy(&u) {
            Ok(v) if v.is_finite() => v,
            Ok(_) => {
                out.failure = Some(Error::NonFiniteEnergy { probe: 0 }.to_string());
                break;
            }
            Err(err) => {
                out.failure = Some(err.to_string());
                break;
            }
        };
        out.iterations = k + 1;
        let improved = out.best.is_none_or(|(_, b)| e < b);
        if improved {
            out.best = Some((u, e));
        }
        let best = out.best.map_or(e, |(_, b)| b);
        out.trace.push(TraceEntry {
            iteration: k + 1,
            energy: e,
            best,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix6;

    fn spd() -> Matrix6<f64> {
        let mut a = Matrix6::from_diagonal(&Vector6::new(1.0, 1.5, 2.0, 0.8, 1.2, 2.5));
        a[(0, 1)] = 0.2;
        a[(1, 0)] = 0.2;
        a[(3, 5)] = -0.3;
        a[(5, 3)] = -0.3;
        a
    }

    #[test]
    fn two_loop_matches_secant_condition() {
        // With a single pair, H y = s must hold exactly.
        let mut m = CurvatureMemory::new(5);
        let s = Vector6::new(0.1, -0.2, 0.05, 0.0, 0.3, 0.1);
        let y = spd() * s;
        assert!(m.push(s, y, 1e-10));
        let hy = m.direction(&y);
        assert!((hy - s).amax() < 1e-12);
    }

    #[test]
    fn skips_non_positive_curvature() {
        let mut m = CurvatureMemory::new(5);
        let s = Vector6::repeat(0.1);
        assert!(!m.push(s, -s, 1e-10));
        assert!(!m.push(s, Vector6::zeros(), 1e-10));
        assert!(m.pairs.is_empty());
    }

    #[test]
    fn memory_is_bounded() {
        let mut m = CurvatureMemory::new(3);
        for k in 1..10 {
            let s = Vector6::repeat(k as f64 * 0.01);
            m.push(s, 2.0 * s, 0.0);
        }
        assert_eq!(m.pairs.len(), 3);
    }

    #[test]
    fn converges_on_quadratic_with_central_differences() {
        let a = spd();
        let target = Vector6::new(0.5, -0.3, 0.2, 0.1, -0.4, 0.25);
        let params = LbfgsParams {
            scheme: DiffScheme::Central,
            ..Default::default()
        };
        let f = |u: &Vector6<f64>| {
            let d = u - target;
            Ok(d.dot(&(a * d)))
        };
        let m = minimize(f, &params).unwrap();
        let (u, _) = m.best.unwrap();
        assert!((u - target).norm() < 1e-4, "{}", (u - target).norm());
    }

    #[test]
    fn trace_best_is_nonincreasing() {
        let f = |u: &Vector6<f64>| Ok((u[0] - 1.0).powi(2) + (3.0 * u[1]).sin());
        let m = minimize(f, &LbfgsParams::default()).unwrap();
        for w in m.trace[1..].windows(2) {
            assert!(w[1].best <= w[0].best);
        }
    }

    #[test]
    fn zero_budget_takes_no_step() {
        let params = LbfgsParams {
            max_iterations: 0,
            ..Default::default()
        };
        let m = minimize(|u: &Vector6<f64>| Ok(u.norm()), &params).unwrap();
        assert!(m.best.is_none());
        assert_eq!(m.trace.len(), 1);
    }

    #[test]
    fn mid_run_failure_is_recorded() {
        let mut calls = 0;
        let f = |u: &Vector6<f64>| {
            calls += 1;
            if calls > 20 {
                Err(Error::InvalidParameter("boom".into()))
            } else {
                Ok(u.norm_squared() + u[0])
            }
        };
        let m = minimize(f, &LbfgsParams::default()).unwrap();
        assert!(m.failure.is_some());
        assert!(m.iterations < 100);
    }
}
