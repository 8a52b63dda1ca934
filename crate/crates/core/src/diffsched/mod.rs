//! Forward diffusion channels and loss weights.
//!
//! Coordinates follow the Gaussian channel
//! `x_t = √ᾱ_t x₀ + √(1 − ᾱ_t) ε`, atom types the categorical channel
//! `p = ᾱ_t v₀ + (1 − ᾱ_t)/K`, and pocket coordinates receive a fixed
//! `N(0, 0.1²)` perturbation. Step `t` runs over `1..=T`; `t = 0` denotes
//! clean data with `ᾱ₀ = 1`.
//!
//! All sampling takes a caller-supplied generator, so fixing its seed fixes
//! the output.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// Standard deviation of the pocket coordinate perturbation, Å.
pub const PROTEIN_NOISE_STD: f64 = 0.1;

/// β-schedule families. `Sigmoid` with `β ∈ [1e-7, 2e-3]` over 1000 steps
/// is the default inherited from the generator this pipeline wraps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScheduleKind {
    /// `β_t` evenly spaced from `beta_start` to `beta_end`.
    Linear { beta_start: f64, beta_end: f64 },
    /// `β_t = σ(s_t)(beta_end − beta_start) + beta_start`, `s_t` evenly
    /// spaced on `[−6, 6]`.
    Sigmoid { beta_start: f64, beta_end: f64 },
    /// `ᾱ(t) = f(t)/f(0)` with `f(t) = cos²(π/2 · (t/T + s)/(1 + s))`,
    /// per-step `β` clipped to 0.999.
    Cosine { s: f64 },
}

impl Default for ScheduleKind {
    fn default() -> Self {
        ScheduleKind::Sigmoid {
            beta_start: 1e-7,
            beta_end: 2e-3,
        }
    }
}

pub const DEFAULT_STEPS: usize = 1000;

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if n == 1 {
            a
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceSchedule {
    /// `alpha[t − 1] = α_t` for `t = 1..=T`.
    alpha: Vec<f64>,
    alpha_bar: Vec<f64>,
}

/// One row of [`VarianceSchedule::table`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleRow {
    pub t: usize,
    pub alpha: f64,
    pub alpha_bar: f64,
    pub lambda: f64,
    pub gamma: f64,
}

impl VarianceSchedule {
    pub fn new(steps: usize, kind: ScheduleKind) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter(
                "schedule needs at least one step".into(),
            ));
        }
        let alphas: Vec<f64> = match kind {
            ScheduleKind::Linear {
                beta_start,
                beta_end,
            } => linspace(beta_start, beta_end, steps)
                .map(|b| 1.0 - b)
                .collect(),
            ScheduleKind::Sigmoid {
                beta_start,
                beta_end,
            } => linspace(-6.0, 6.0, steps)
                .map(|s| 1.0 - ((beta_end - beta_start) / (1.0 + (-s).exp()) + beta_start))
                .collect(),
            ScheduleKind::Cosine { s } => {
                let f = |t: f64| {
                    (std::f64::consts::FRAC_PI_2 * (t / steps as f64 + s) / (1.0 + s))
                        .cos()
                        .powi(2)
                };
                (1..=steps)
                    .map(|t| {
                        let beta = 1.0 - f(t as f64) / f(t as f64 - 1.0);
                        1.0 - beta.clamp(0.0, 0.999)
                    })
                    .collect()
            }
        };
        Self::from_alphas(alphas)
    }

    /// Schedule from explicit per-step `α_t`, each strictly inside (0, 1).
    pub fn from_alphas(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParameter(
                "schedule needs at least one step".into(),
            ));
        }
        if let Some((i, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !(**a > 0.0 && **a < 1.0))
        {
            return Err(Error::InvalidParameter(format!(
                "alpha at step {} is {a}, outside (0, 1)",
                i + 1
            )));
        }
        let mut alpha_bar = Vec::with_capacity(alpha.len());
        let mut acc = 1.0;
        for a in &alpha {
            acc *= a;
            alpha_bar.push(acc);
        }
        Ok(VarianceSchedule { alpha, alpha_bar })
    }

    pub fn steps(&self) -> usize {
        self.alpha.len()
    }

    fn check(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.steps() {
            return Err(Error::InvalidParameter(format!(
                "step {t} outside 1..={}",
                self.steps()
            )));
        }
        Ok(())
    }

    fn check_with_zero(&self, t: usize) -> Result<()> {
        if t > self.steps() {
            return Err(Error::InvalidParameter(format!(
                "step {t} outside 0..={}",
                self.steps()
            )));
        }
        Ok(())
    }

    pub fn alpha(&self, t: usize) -> Result<f64> {
        self.check(t)?;
        Ok(self.alpha[t - 1])
    }

    /// `ᾱ_t`, with `ᾱ₀ = 1`.
    pub fn alpha_bar(&self, t: usize) -> Result<f64> {
        self.check_with_zero(t)?;
        Ok(if t == 0 { 1.0 } else { self.alpha_bar[t - 1] })
    }

    /// `σ_t² = 1 − α_t`.
    pub fn sigma_sq(&self, t: usize) -> Result<f64> {
        Ok(1.0 - self.alpha(t)?)
    }

    /// Coordinate loss weight `λ_t = σ_t² / α_t²`.
    pub fn lambda(&self, t: usize) -> Result<f64> {
        let a = self.alpha(t)?;
        Ok((1.0 - a) / (a * a))
    }

    /// Type loss weight `γ_t = 1 − ᾱ_t`.
    pub fn gamma(&self, t: usize) -> Result<f64> {
        Ok(1.0 - self.alpha_bar(t)?)
    }

    pub fn table(&self) -> Vec<ScheduleRow> {
        (1..=self.steps())
            .map(|t| {
                let a = self.alpha[t - 1];
                ScheduleRow {
                    t,
                    alpha: a,
                    alpha_bar: self.alpha_bar[t - 1],
                    lambda: (1.0 - a) / (a * a),
                    gamma: 1.0 - self.alpha_bar[t - 1],
                }
            })
            .collect()
    }
}

fn normal3<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    Vec3::from_fn(|_, _| StandardNormal.sample(rng))
}

/// Samples `x_t` given `x₀`; returns `(x_t, ε)`.
pub fn noise_coordinates<R: Rng + ?Sized>(
    x0: &[Vec3],
    t: usize,
    schedule: &VarianceSchedule,
    rng: &mut R,
) -> Result<(Vec<Vec3>, Vec<Vec3>)> {
    let ab = schedule.alpha_bar(t)?;
    let (a, b) = (ab.sqrt(), (1.0 - ab).sqrt());
    let eps: Vec<Vec3> = x0.iter().map(|_| normal3(rng)).collect();
    let xt = x0.iter().zip(&eps).map(|(x, e)| a * x + b * e).collect();
    Ok((xt, eps))
}

/// `ᾱ v₀ + (1 − ᾱ)/K` for a one-hot `v₀`.
pub fn type_probabilities(v0: &[f64], alpha_bar: f64) -> Result<Vec<f64>> {
    let k = v0.len();
    let ones = v0.iter().filter(|&&x| x == 1.0).count();
    let zeros = v0.iter().filter(|&&x| x == 0.0).count();
    if k == 0 || ones != 1 || ones + zeros != k {
        return Err(Error::InvalidParameter(
            "type vector must be one-hot".into(),
        ));
    }
    let floor = (1.0 - alpha_bar) / k as f64;
    Ok(v0.iter().map(|x| alpha_bar * x + floor).collect())
}

/// Samples a noisy type class at step `t`; returns `(class, p)`.
pub fn noise_types<R: Rng + ?Sized>(
    v0: &[f64],
    t: usize,
    schedule: &VarianceSchedule,
    rng: &mut R,
) -> Result<(usize, Vec<f64>)> {
    let p = type_probabilities(v0, schedule.alpha_bar(t)?)?;
    let dist = WeightedIndex::new(&p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((dist.sample(rng), p))
}

/// `x + σ ε` with `ε ~ N(0, I)`; `σ = 0` returns the input.
pub fn perturb_protein<R: Rng + ?Sized>(x: &[Vec3], sigma: f64, rng: &mut R) -> Result<Vec<Vec3>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise scale must be non-negative, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(x.to_vec());
    }
    Ok(x.iter().map(|p| p + sigma * normal3(rng)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreTarget {
    /// `∇ log q(x_t | x₀) = −(x_t − √ᾱ_t x₀)/(1 − ᾱ_t)`.
    pub target: Vec<Vec3>,
    /// `λ_t`.
    pub weight: f64,
}

pub fn score_targets(
    x0: &[Vec3],
    xt: &[Vec3],
    t: usize,
    schedule: &VarianceSchedule,
) -> Result<ScoreTarget> {
    if x0.len() != xt.len() {
        return Err(Error::DimensionMismatch {
            expected: x0.len(),
            got: xt.len(),
        });
    }
    let weight = schedule.lambda(t)?;
    let ab = schedule.alpha_bar(t)?;
    let (a, var) = (ab.sqrt(), 1.0 - ab);
    let target = x0.iter().zip(xt).map(|(x, y)| -(y - a * x) / var).collect();
    Ok(ScoreTarget { target, weight })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionLoss {
    /// `λ_t` times the mean squared error of the score prediction per atom.
    pub coordinate: f64,
    /// `γ_t` times the mean cross-entropy of the type predictions.
    pub types: f64,
    pub total: f64,
}

/// Weighted losses of external predictions at step `t`.
///
/// `type_targets` are one-hot rows and `type_predictions` probability rows.
pub fn losses(
    score: &ScoreTarget,
    predicted_score: &[Vec3],
    type_targets: &[Vec<f64>],
    type_predictions: &[Vec<f64>],
    t: usize,
    schedule: &VarianceSchedule,
) -> Result<DiffusionLoss> {
    if predicted_score.len() != score.target.len() {
        return Err(Error::DimensionMismatch {
            expected: score.target.len(),
            got: predicted_score.len(),
        });
    }
    if type_predictions.len() != type_targets.len() {
        return Err(Error::DimensionMismatch {
            expected: type_targets.len(),
            got: type_predictions.len(),
        });
    }
    let n = score.target.len().max(1) as f64;
    let mse: f64 = predicted_score
        .iter()
        .zip(&score.target)
        .map(|(p, q)| (p - q).norm_squared())
        .sum::<f64>()
        / n;
    let mut ce = 0.0;
    for (v, p) in type_targets.iter().zip(type_predictions) {
        if v.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                got: p.len(),
            });
        }
        ce -= v
            .iter()
            .zip(p)
            .map(|(a, b)| if *a == 0.0 { 0.0 } else { a * b.ln() })
            .sum::<f64>();
    }
    let ce = ce / type_targets.len().max(1) as f64;
    let coordinate = score.weight * mse;
    let types = schedule.gamma(t)? * ce;
    Ok(DiffusionLoss {
        coordinate,
        types,
        total: coordinate + types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_step_arithmetic() {
        let s = VarianceSchedule::from_alphas(vec![0.99]).unwrap();
        assert_eq!(s.alpha_bar(1).unwrap(), 0.99);
        assert!((s.lambda(1).unwrap() - 0.01 / 0.9801).abs() < 1e-15);
        assert!((s.gamma(1).unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(s.alpha_bar(0).unwrap(), 1.0);
        assert!(s.alpha(0).is_err() && s.alpha_bar(2).is_err());
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(VarianceSchedule::from_alphas(vec![0.5, 1.0]).is_err());
        assert!(VarianceSchedule::new(
            10,
            ScheduleKind::Linear {
                beta_start: 0.1,
                beta_end: 1.2
            }
        )
        .is_err());
        assert!(VarianceSchedule::new(0, ScheduleKind::default()).is_err());
    }

    #[test]
    fn every_family_is_strictly_decreasing() {
        for kind in [
            ScheduleKind::default(),
            ScheduleKind::Linear {
                beta_start: 1e-4,
                beta_end: 2e-2,
            },
            ScheduleKind::Cosine { s: 0.008 },
        ] {
            let s = VarianceSchedule::new(1000, kind).unwrap();
            let t = s.table();
            assert!(
                t.windows(2).all(|w| w[1].alpha_bar < w[0].alpha_bar),
                "{kind:?}"
            );
            assert!(t.iter().all(|r| r.lambda > 0.0));
        }
    }

    #[test]
    fn sigmoid_endpoints() {
        let s = VarianceSchedule::new(1000, ScheduleKind::default()).unwrap();
        let sig = |x: f64| 1.0 / (1.0 + (-x).exp());
        let b1 = sig(-6.0) * (2e-3 - 1e-7) + 1e-7;
        assert!((s.alpha(1).unwrap() - (1.0 - b1)).abs() < 1e-15);
    }

    #[test]
    fn clean_step_is_identity() {
        let s = VarianceSchedule::new(10, ScheduleKind::default()).unwrap();
        let x0 = vec![Vec3::new(1.0, -2.0, 3.5)];
        let (xt, _) = noise_coordinates(&x0, 0, &s, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(xt, x0);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let s = VarianceSchedule::new(100, ScheduleKind::default()).unwrap();
        let x0 = vec![Vec3::new(0.3, 0.1, -0.2); 5];
        let a = noise_coordinates(&x0, 40, &s, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = noise_coordinates(&x0, 40, &s, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn type_endpoints() {
        let v = [0.0, 1.0, 0.0, 0.0];
        assert_eq!(type_probabilities(&v, 1.0).unwrap(), v.to_vec());
        assert!(type_probabilities(&v, 0.0)
            .unwrap()
            .iter()
            .all(|p| (p - 0.25).abs() < 1e-12));
        assert!(type_probabilities(&[0.5, 0.5], 0.3).is_err());
        assert!(type_probabilities(&[1.0, 1.0], 0.3).is_err());
    }

    #[test]
    fn zero_noise_prediction_has_zero_loss() {
        let s = VarianceSchedule::new(50, ScheduleKind::default()).unwrap();
        let x0 = vec![Vec3::new(1.0, 2.0, 3.0)];
        let ab = s.alpha_bar(20).unwrap();
        let xt = vec![ab.sqrt() * x0[0]];
        let st = score_targets(&x0, &xt, 20, &s).unwrap();
        assert!(st.target[0].norm() < 1e-12);
        let l = losses(
            &st,
            &st.target,
            &[vec![1.0, 0.0]],
            &[vec![1.0, 1e-300]],
            20,
            &s,
        )
        .unwrap();
        assert_eq!(l.coordinate, 0.0);
        assert!(l.types.abs() < 1e-12);
        assert!(score_targets(&x0, &xt, 0, &s).is_err());
    }

    #[test]
    fn zero_sigma_perturbation_is_identity() {
        let x = vec![Vec3::new(1.0, 2.0, 3.0)];
        assert_eq!(
            perturb_protein(&x, 0.0, &mut ChaCha8Rng::seed_from_u64(0)).unwrap(),
            x
        );
        assert!(perturb_protein(&x, -1.0, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
