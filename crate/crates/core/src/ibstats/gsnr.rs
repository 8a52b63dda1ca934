use serde::Serialize;

use crate::{Error, Result};

/// Added to the noise term so identical gradients give a finite ratio.
pub const SNR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSnr {
    /// Index of the first sample in the window.
    pub start: usize,
    pub len: usize,
    /// `‖mean g‖² / (tr Cov g + 1e-12)`.
    pub snr: f64,
    /// Covariance trace was zero; `snr` is the floor-limited value.
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GsnrReport {
    pub windows: Vec<WindowSnr>,
    /// Population variance of the last `rolling` window SNRs, one entry per
    /// window from index `rolling − 1` on.
    pub rolling_variance: Vec<f64>,
}

fn window_snr(block: &[Vec<f64>]) -> (f64, bool) {
    let n = block.len() as f64;
    let dim = block[0].len();
    let mut mean = vec![0.0; dim];
    for g in block {
        for (m, x) in mean.iter_mut().zip(g) {
            *m += x / n;
        }
    }
    let mut trace = 0.0;
    for g in block {
        for (m, x) in mean.iter().zip(g) {
            trace += (x - m).powi(2);
        }
    }
    trace /= n - 1.0;
    let signal: f64 = mean.iter().map(|m| m * m).sum();
    (signal / (trace + SNR_FLOOR), trace == 0.0)
}

/// Gradient signal-to-noise ratio over consecutive non-overlapping windows
/// of `window` samples (a short tail is dropped), using the unbiased
/// per-coordinate sample variance.
pub fn gradient_snr(samples: &[Vec<f64>], window: usize, rolling: usize) -> Result<GsnrReport> {
    if window < 2 {
        return Err(Error::InvalidParameter(
            "window must hold at least 2 gradients".into(),
        ));
    }
    if rolling == 0 {
        return Err(Error::InvalidParameter(
            "rolling span must be at least 1".into(),
        ));
    }
    let Some(first) = samples.first() else {
        return Err(Error::Empty("no gradient samples"));
    };
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Empty("gradient vectors have no components"));
    }
    if let Some(bad) = samples.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let windows: Vec<WindowSnr> = samples
        .chunks_exact(window)
        .enumerate()
        .map(|(w, block)| {
            let (snr, capped) = window_snr(block);
            WindowSnr {
                start: w * window,
                len: window,
                snr,
                capped,
            }
        })
        .collect();
    let snrs: Vec<f64> = windows.iter().map(|w| w.snr).collect();
    let rolling_variance = snrs
        .windows(rolling)
        .map(|s| {
            let m = s.iter().sum::<f64>() / s.len() as f64;
            s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / s.len() as f64
        })
        .collect();
    Ok(GsnrReport {
        windows,
        rolling_variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn identical_vectors_hit_the_floor() {
        let g = vec![vec![3.0, 4.0]; 4];
        let r = gradient_snr(&g, 4, 1).unwrap();
        assert_eq!(r.windows.len(), 1);
        assert!(r.windows[0].capped);
        assert!((r.windows[0].snr - 25.0 / 1e-12).abs() / (25.0 / 1e-12) < 1e-12);
    }

    #[test]
    fn zero_mean_noise_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g: Vec<Vec<f64>> = (0..4096)
            .map(|_| (0..8).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        let r = gradient_snr(&g, 4096, 1).unwrap();
        // Expected value is 1/n for pure noise.
        assert!(r.windows[0].snr < 0.01, "{}", r.windows[0].snr);
    }

    #[test]
    fn signal_to_noise_ratio_is_recovered() {
        // Mean vector with ‖μ‖² = 8 · 0.25, noise variance 1 per coordinate.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dim = 8;
        let g: Vec<Vec<f64>> = (0..256 * 20)
            .map(|_| {
                (0..dim)
                    .map(|_| 0.5 + Distribution::<f64>::sample(&StandardNormal, &mut rng))
                    .collect()
            })
            .collect();
        let r = gradient_snr(&g, 256, 5).unwrap();
        let mean: f64 = r.windows.iter().map(|w| w.snr).sum::<f64>() / r.windows.len() as f64;
        assert!((mean - 0.25).abs() / 0.25 < 0.15, "{mean}");
        assert_eq!(r.rolling_variance.len(), 16);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(matches!(
            gradient_snr(&g, 2, 1),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }
}
