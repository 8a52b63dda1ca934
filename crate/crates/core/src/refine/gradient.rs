use nalgebra::Vector6;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default finite-difference step on the pose parameters.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffScheme {
    /// `(E(u + εe_i) − E(u)) / ε`: seven evaluations including the base point.
    #[default]
    Forward,
    /// `(E(u + εe_i) − E(u − εe_i)) / 2ε`: thirteen evaluations.
    Central,
}

fn checked(value: f64, probe: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteEnergy { probe })
    }
}

/// Gradient of `energy` at `u` given the already evaluated `e0 = E(u)`.
///
/// Probe indices in errors: 0 is the base point, 1..=6 the forward probes,
/// 7..=12 the backward probes of the central scheme.
pub fn gradient_with_value<F>(
    energy: &mut F,
    u: &Vector6<f64>,
    e0: f64,
    eps: f64,
    scheme: DiffScheme,
) -> Result<Vector6<f64>>
where
    F: FnMut(&Vector6<f64>) -> Result<f64>,
{
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {eps}"
        )));
    }
    checked(e0, 0)?;
    let mut g = Vector6::zeros();
    for i in 0..6 {
        let mut up = *u;
        up[i] += eps;
        let e_up = checked(energy(&up)?, i + 1)?;
        g[i] = match scheme {
            DiffScheme::Forward => (e_up - e0) / eps,
            DiffScheme::Central => {
                let mut down = *u;
                down[i] -= eps;
                let e_down = checked(energy(&down)?, i + 7)?;
                (e_up - e_down) / (2.0 * eps)
            }
        };
    }
    Ok(g)
}

/// Forward-difference gradient `g_i = (E(u + εe_i) − E(u)) / ε`.
pub fn fd_gradient<F>(mut energy: F, u: &Vector6<f64>, eps: f64) -> Result<Vector6<f64>>
where
    F: FnMut(&Vector6<f64>) -> Result<f64>,
{
    let e0 = energy(u)?;
    gradient_with_value(&mut energy, u, e0, eps, DiffScheme::Forward)
}

/// Central-difference gradient, used as a higher-order reference.
pub fn central_gradient<F>(mut energy: F, u: &Vector6<f64>, eps: f64) -> Result<Vector6<f64>>
where
    F: FnMut(&Vector6<f64>) -> Result<f64>,
{
    let e0 = energy(u)?;
    gradient_with_value(&mut energy, u, e0, eps, DiffScheme::Central)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_at_origin_gives_eps() {
        let g = fd_gradient(|u| Ok(u.norm_squared()), &Vector6::zeros(), 1e-3).unwrap();
        for gi in g.iter() {
            assert!((gi - 1e-3).abs() < 1e-15, "{gi}");
        }
    }

    #[test]
    fn linear_is_exact() {
        let a = Vector6::new(1.0, -2.0, 0.5, 3.0, 0.0, -0.25);
        let u = Vector6::new(0.3, 0.1, -0.2, 0.0, 1.0, 2.0);
        let g = fd_gradient(|v| Ok(a.dot(v)), &u, 1e-3).unwrap();
        assert!((g - a).amax() < 1e-9);
    }

    #[test]
    fn counts_seven_evaluations() {
        let mut calls = 0;
        fd_gradient(
            |u| {
                calls += 1;
                Ok(u.sum())
            },
            &Vector6::zeros(),
            1e-3,
        )
        .unwrap();
        assert_eq!(calls, 7);
    }

    #[test]
    fn non_finite_probe_is_reported() {
        let r = fd_gradient(
            |u| Ok(if u[2] > 0.0 { f64::NAN } else { 0.0 }),
            &Vector6::zeros(),
            1e-3,
        );
        assert!(matches!(r, Err(Error::NonFiniteEnergy { probe: 3 })));
        let r = fd_gradient(|_| Ok(f64::INFINITY), &Vector6::zeros(), 1e-3);
        assert!(matches!(r, Err(Error::NonFiniteEnergy { probe: 0 })));
    }

    #[test]
    fn rejects_bad_step() {
        assert!(fd_gradient(|_| Ok(0.0), &Vector6::zeros(), 0.0).is_err());
    }
}
