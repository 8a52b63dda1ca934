//! Rigid-body poses parameterized by a translation and an axis-angle vector.

use nalgebra::{Matrix3, Vector6};
use serde::{Serialize, Serializer};

use crate::Vec3;

/// Below this angle the closed form is replaced by its Taylor expansion.
const SMALL_ANGLE: f64 = 1e-12;

/// Drift in `RᵀR - I` (max-abs entry) that triggers re-orthonormalization.
const ORTHONORMAL_DRIFT: f64 = 1e-9;

pub fn skew(w: &Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Exponential map so(3) → SO(3): `R = I + sin θ K + (1 − cos θ) K²` with
/// `θ = |ω|` and `K` the skew matrix of the unit axis.
pub fn rodrigues(omega: &Vec3) -> Matrix3<f64> {
    let theta = omega.norm();
    let w = skew(omega);
    if theta < SMALL_ANGLE {
        return Matrix3::identity() + w + 0.5 * w * w;
    }
    let k = w / theta;
    Matrix3::identity() + theta.sin() * k + (1.0 - theta.cos()) * (k * k)
}

/// Inverse of [`rodrigues`], returning the axis-angle vector with angle in
/// `[0, π]`.
///
/// The angle comes from `atan2(sin θ, cos θ)` so small rotations keep full
/// relative precision.
pub fn log_map(r: &Matrix3<f64>) -> Vec3 {
    // v = sin θ · k
    let v = 0.5
        * Vec3::new(
            r[(2, 1)] - r[(1, 2)],
            r[(0, 2)] - r[(2, 0)],
            r[(1, 0)] - r[(0, 1)],
        );
    let cos = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    let sin = v.norm();
    let theta = sin.atan2(cos);
    if cos > -0.9 {
        // θ / sin θ → 1 as θ → 0.
        let scale = if sin < SMALL_ANGLE { 1.0 } else { theta / sin };
        return v * scale;
    }
    // Near π: k kᵀ = ((R + Rᵀ)/2 − cos θ I) / (1 − cos θ).
    let kk = (0.5 * (r + r.transpose()) - cos * Matrix3::identity()) / (1.0 - cos);
    let i = (0..3)
        .max_by(|&a, &b| kk[(a, a)].total_cmp(&kk[(b, b)]))
        .unwrap_or(0);
    let mut k = Vec3::from(kk.column(i)) / kk[(i, i)].max(0.0).sqrt();
    if k.dot(&v) < 0.0 {
        k = -k;
    }
    k.normalize() * theta
}

/// Projects a nearly orthonormal matrix back onto SO(3) (polar factor).
fn reorthonormalize(r: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = r.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested Vᵀ");
    let mut q = u * v_t;
    if q.determinant() < 0.0 {
        let mut u = u;
        u.column_mut(2).neg_mut();
        q = u * v_t;
    }
    q
}

fn orthonormality_drift(r: &Matrix3<f64>) -> f64 {
    (r.transpose() * r - Matrix3::identity()).amax()
}

/// Rigid transform `x' = R (x − c) + c + t` about a fixed rotation centre `c`.
///
/// `params` is the 6-vector `(δx, δy, δz, ωx, ωy, ωz)`: translation in Å
/// followed by the axis-angle rotation in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidPose {
    params: Vector6<f64>,
    rotation: Matrix3<f64>,
    translation: Vec3,
    center: Vec3,
}

impl RigidPose {
    pub fn identity(center: Vec3) -> Self {
        RigidPose {
            params: Vector6::zeros(),
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
            center,
        }
    }

    pub fn from_params(params: Vector6<f64>, center: Vec3) -> Self {
        let translation = params.fixed_rows::<3>(0).into_owned();
        let omega = params.fixed_rows::<3>(3).into_owned();
        RigidPose {
            params,
            rotation: rodrigues(&omega),
            translation,
            center,
        }
    }

    pub fn translation_only(delta: Vec3, center: Vec3) -> Self {
        Self::from_params(
            Vector6::new(delta.x, delta.y, delta.z, 0.0, 0.0, 0.0),
            center,
        )
    }

    pub fn params(&self) -> &Vector6<f64> {
        &self.params
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    pub fn center(&self) -> &Vec3 {
        &self.center
    }

    /// Composes a small update on the left: `R' = exp(ω×) R`, `t' = t + δ`.
    ///
    /// The rotation is re-orthonormalized when `RᵀR` drifts from identity by
    /// more than 1e-9, and the stored parameters are refreshed from `R'`.
    pub fn compose_update(&self, omega: &Vec3, delta: &Vec3) -> RigidPose {
        let mut rotation = rodrigues(omega) * self.rotation;
        if orthonormality_drift(&rotation) > ORTHONORMAL_DRIFT {
            rotation = reorthonormalize(&rotation);
        }
        let translation = self.translation + delta;
        let w = log_map(&rotation);
        RigidPose {
            params: Vector6::new(translation.x, translation.y, translation.z, w.x, w.y, w.z),
            rotation,
            translation,
            center: self.center,
        }
    }

    pub fn apply_point(&self, x: &Vec3) -> Vec3 {
        self.rotation * (x - self.center) + self.center + self.translation
    }

    pub fn apply(&self, coords: &[Vec3]) -> Vec<Vec3> {
        coords.iter().map(|x| self.apply_point(x)).collect()
    }

    pub fn apply_into(&self, coords: &[Vec3], out: &mut Vec<Vec3>) {
        out.clear();
        out.extend(coords.iter().map(|x| self.apply_point(x)));
    }
}

impl Serialize for RigidPose {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let u: Vec<f64> = self.params.iter().copied().collect();
        u.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_vector_is_identity() {
        assert_eq!(rodrigues(&Vec3::zeros()), Matrix3::identity());
        let p = RigidPose::identity(Vec3::new(1.0, 2.0, 3.0));
        let x = Vec3::new(-4.0, 0.5, 9.0);
        assert_eq!(p.apply_point(&x), x);
    }

    #[test]
    fn quarter_turn_about_z() {
        let r = rodrigues(&Vec3::new(0.0, 0.0, FRAC_PI_2));
        let y = r * Vec3::x();
        assert_relative_eq!(y, Vec3::y(), epsilon = 1e-12);
    }

    #[test]
    fn tiny_angles_use_taylor_branch() {
        let w = Vec3::new(1e-13, -2e-13, 5e-14);
        let r = rodrigues(&w);
        assert_relative_eq!(r, Matrix3::identity() + skew(&w), epsilon = 1e-20);
    }

    #[test]
    fn two_quarter_turns_make_a_half_turn() {
        let q = Vec3::new(0.0, 0.0, FRAC_PI_2);
        let p = RigidPose::identity(Vec3::zeros())
            .compose_update(&q, &Vec3::zeros())
            .compose_update(&q, &Vec3::zeros());
        let half = rodrigues(&Vec3::new(0.0, 0.0, 2.0 * FRAC_PI_2));
        assert_relative_eq!(*p.rotation(), half, epsilon = 1e-10);
    }

    #[test]
    fn zero_update_leaves_pose_unchanged() {
        let p = RigidPose::from_params(Vector6::new(1.0, 0.0, -2.0, 0.1, 0.2, -0.3), Vec3::zeros());
        let q = p.compose_update(&Vec3::zeros(), &Vec3::zeros());
        assert_relative_eq!(*q.rotation(), *p.rotation(), epsilon = 1e-15);
        assert_eq!(q.translation(), p.translation());
        assert_relative_eq!(*q.params(), *p.params(), epsilon = 1e-12);
    }

    #[test]
    fn pure_translation_shifts_every_point() {
        let p = RigidPose::translation_only(Vec3::new(1.0, 2.0, 3.0), Vec3::new(5.0, 5.0, 5.0));
        let xs = [Vec3::zeros(), Vec3::new(-1.0, 4.0, 2.5)];
        for (a, b) in xs.iter().zip(p.apply(&xs)) {
            assert_relative_eq!(b - a, Vec3::new(1.0, 2.0, 3.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn rotation_is_about_the_centre() {
        let c = Vec3::new(3.0, -1.0, 2.0);
        let p = RigidPose::from_params(Vector6::new(0.0, 0.0, 0.0, 0.3, -1.1, 0.7), c);
        assert_relative_eq!(p.apply_point(&c), c, epsilon = 1e-14);
    }

    #[test]
    fn reorthonormalize_restores_so3() {
        let mut r = rodrigues(&Vec3::new(0.4, 0.1, -0.9));
        r[(0, 1)] += 1e-6;
        let q = reorthonormalize(&r);
        assert!(orthonormality_drift(&q) < 1e-12);
        assert_relative_eq!(q.determinant(), 1.0, epsilon = 1e-12);
    }
}
