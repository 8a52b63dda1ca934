use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::gamma::{digamma, ln_gamma};

use super::hexbin::{hexbin, HexBin};
use super::summary::ContextSummary;
use crate::{Error, Result};

pub const DEFAULT_NEIGHBORS: usize = 3;
/// Half-width of the uniform jitter applied to duplicated points.
pub const JITTER: f64 = 1e-9;
/// Fraction of zero neighbour distances above which a warning is logged.
pub const DUPLICATE_WARN_FRACTION: f64 = 0.1;
/// Below this many summaries the density is flagged low-confidence.
pub const MIN_CONFIDENT_SAMPLES: usize = 50;
pub const LATENT_DIMENSION: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyEstimate {
    /// Differential entropy in nats; `None` when the sample has at most `k`
    /// distinct points.
    pub entropy: Option<f64>,
    pub n: usize,
    pub k: usize,
    /// Fraction of points whose k-th neighbour distance was zero before
    /// jittering.
    pub zero_distance_fraction: f64,
    pub jittered: bool,
}

/// Natural log of the volume of the unit `d`-ball.
pub fn ln_unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    h * std::f64::consts::PI.ln() - ln_gamma(h + 1.0)
}

fn kth_distances<const D: usize>(points: &[[f64; D]], k: usize) -> Vec<f64> {
    let mut buf = Vec::with_capacity(points.len());
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            buf.clear();
            for (j, q) in points.iter().enumerate() {
                if i != j {
                    buf.push(p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>());
                }
            }
            let (_, kth, _) = buf.select_nth_unstable_by(k - 1, f64::total_cmp);
            kth.sqrt()
        })
        .collect()
}

/// Kozachenko–Leonenko k-nearest-neighbour entropy estimate
/// `Ĥ = ψ(n) − ψ(k) + ln V_d + (d/n) Σ ln ε_i`, with `ε_i` the Euclidean
/// distance from point `i` to its k-th neighbour.
///
/// Points are put in canonical order first; if any `ε_i` is zero, every
/// coordinate gets a seeded uniform jitter in `[−1e-9, 1e-9]`. The result
/// therefore does not depend on input order.
pub fn kl_entropy<const D: usize>(points: &[[f64; D]], k: usize) -> Result<EntropyEstimate> {
    let n = points.len();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n <= k {
        return Err(Error::InvalidParameter(format!(
            "need more than k = {k} points, got {n}"
        )));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(
            "non-finite coordinate in entropy sample".into(),
        ));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut distinct = pts.clone();
    distinct.dedup();
    let mut eps = kth_distances(&pts, k);
    let zeros = eps.iter().filter(|&&e| e == 0.0).count();
    let zero_distance_fraction = zeros as f64 / n as f64;
    let degenerate = distinct.len() <= k;
    let jittered = zeros > 0 && !degenerate;
    if jittered {
        if zero_distance_fraction > DUPLICATE_WARN_FRACTION {
            warn!(
                "{:.1}% of points have a zero {k}-th neighbour distance; jittering by {JITTER:e}",
                100.0 * zero_distance_fraction
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for p in pts.iter_mut() {
            for x in p.iter_mut() {
                *x += rng.random_range(-JITTER..=JITTER);
            }
        }
        eps = kth_distances(&pts, k);
    }
    let entropy = (!degenerate).then(|| {
        let nf = n as f64;
        let sum_ln: f64 = eps.iter().map(|e| e.ln()).sum();
        digamma(nf) - digamma(k as f64) + ln_unit_ball_volume(D) + D as f64 * sum_ln / nf
    });
    Ok(EntropyEstimate {
        entropy,
        n,
        k,
        zero_distance_fraction,
        jittered,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisMeans {
    pub n_bar: f64,
    pub d_bar: f64,
    pub t_bar: f64,
    pub k_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hexbins {
    /// `(n̄, d̄)` plane.
    pub distance_plane: Vec<HexBin>,
    /// `(t̄, k̄)` plane.
    pub interaction_plane: Vec<HexBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    /// `Ĥ(Z) / 4` in nats; `None` for degenerate samples.
    pub rho: Option<f64>,
    pub entropy: EntropyEstimate,
    /// Summaries used (those with a defined `d̄`).
    pub n: usize,
    /// Summaries skipped because they had no edges.
    pub excluded: usize,
    pub low_confidence: bool,
    pub means: AxisMeans,
    pub hexbins: Hexbins,
}

/// Information density `ρ = Ĥ(Z)/4` of a set of context summaries.
///
/// Because `Z` is a deterministic function of the complex, `I(Z; X) = H(Z)`.
/// Summaries without edges have no `d̄` and are left out.
pub fn information_density(
    summaries: &[ContextSummary],
    k: usize,
    gridsize: usize,
) -> Result<DensityReport> {
    let z: Vec<[f64; 4]> = summaries
        .iter()
        .filter_map(ContextSummary::vector)
        .collect();
    let excluded = summaries.len() - z.len();
    if z.is_empty() {
        return Err(Error::Empty("no summaries with virtual edges"));
    }
    let entropy = kl_entropy(&z, k)?;
    let n = z.len();
    let mean = |a: usize| z.iter().map(|v| v[a]).sum::<f64>() / n as f64;
    let plane = |a: usize, b: usize| {
        let xs: Vec<f64> = z.iter().map(|v| v[a]).collect();
        let ys: Vec<f64> = z.iter().map(|v| v[b]).collect();
        hexbin(&xs, &ys, gridsize)
    };
    Ok(DensityReport {
        rho: entropy.entropy.map(|h| h / LATENT_DIMENSION),
        entropy,
        n,
        excluded,
        low_confidence: n < MIN_CONFIDENT_SAMPLES,
        means: AxisMeans {
            n_bar: mean(0),
            d_bar: mean(1),
            t_bar: mean(2),
            k_bar: mean(3),
        },
        hexbins: Hexbins {
            distance_plane: plane(0, 1),
            interaction_plane: plane(2, 3),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_volumes() {
        assert!((ln_unit_ball_volume(1) - 2f64.ln()).abs() < 1e-14);
        assert!((ln_unit_ball_volume(2) - std::f64::consts::PI.ln()).abs() < 1e-14);
        let v4 = std::f64::consts::PI.powi(2) / 2.0;
        assert!((ln_unit_ball_volume(4) - v4.ln()).abs() < 1e-14);
    }

    #[test]
    fn identical_points_are_degenerate() {
        let pts = vec![[1.0, 2.0, 3.0, 4.0]; 20];
        let e = kl_entropy(&pts, 3).unwrap();
        assert_eq!(e.entropy, None);
        assert_eq!(e.zero_distance_fraction, 1.0);
    }

    #[test]
    fn uniform_interval_entropy_is_near_zero() {
        // U(0, 1) has zero differential entropy.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<[f64; 1]> = (0..4000).map(|_| [rng.random::<f64>()]).collect();
        let h = kl_entropy(&pts, 3).unwrap().entropy.unwrap();
        assert!(h.abs() < 0.1, "{h}");
    }

    #[test]
    fn permutation_invariant_with_duplicates() {
        let mut pts: Vec<[f64; 2]> = (0..60)
            .map(|i| [(i % 4) as f64, (i % 3) as f64 * 0.3])
            .collect();
        let a = kl_entropy(&pts, 3).unwrap();
        assert!(a.jittered);
        pts.reverse();
        pts.swap(3, 40);
        let b = kl_entropy(&pts, 3).unwrap();
        assert_eq!(a.entropy, b.entropy);
    }

    #[test]
    fn too_few_points_is_an_error() {
        assert!(kl_entropy(&[[0.0], [1.0], [2.0]], 3).is_err());
    }
}
