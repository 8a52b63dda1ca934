use serde::Serialize;

pub const DEFAULT_GRIDSIZE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HexBin {
    pub center_x: f64,
    pub center_y: f64,
    pub count: usize,
}

/// Widens a zero-width range the way plotting libraries do.
fn nonsingular(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo > f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
        return (lo, hi);
    }
    if lo == 0.0 {
        (-0.1, 0.1)
    } else {
        (lo - 0.1 * lo.abs(), hi + 0.1 * hi.abs())
    }
}

/// Hexagonal binning on two interleaved rectangular lattices with
/// `gridsize` columns and rows spanning the data range.
///
/// A point goes to the nearer of its two candidate centres under the hex
/// metric `dx² + 3 dy²` (in lattice units). Only non-empty bins are returned,
/// first lattice before second, row-major.
pub fn hexbin(xs: &[f64], ys: &[f64], gridsize: usize) -> Vec<HexBin> {
    assert_eq!(xs.len(), ys.len(), "coordinate arrays differ in length");
    if xs.is_empty() || gridsize == 0 {
        return Vec::new();
    }
    let (nx, ny) = (gridsize, gridsize);
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = nonsingular(lo, hi);
        let pad = 1e-9 * (hi - lo);
        (lo - pad, hi + pad)
    };
    let (xmin, xmax) = range(xs);
    let (ymin, ymax) = range(ys);
    let sx = (xmax - xmin) / nx as f64;
    let sy = (ymax - ymin) / ny as f64;

    let (nx1, ny1) = (nx + 1, ny + 1);
    let mut lattice1 = vec![0usize; nx1 * ny1];
    let mut lattice2 = vec![0usize; nx * ny];
    for (&x, &y) in xs.iter().zip(ys) {
        let ix = (x - xmin) / sx;
        let iy = (y - ymin) / sy;
        let (ix1, iy1) = (ix.round(), iy.round());
        let (ix2, iy2) = (ix.floor(), iy.floor());
        let d1 = (ix - ix1).powi(2) + 3.0 * (iy - iy1).powi(2);
        let d2 = (ix - ix2 - 0.5).powi(2) + 3.0 * (iy - iy2 - 0.5).powi(2);
        if d1 < d2 {
            let (i, j) = (ix1 as usize, iy1 as usize);
            if i < nx1 && j < ny1 {
                lattice1[i * ny1 + j] += 1;
            }
        } else {
            let (i, j) = (ix2 as usize, iy2 as usize);
            if i < nx && j < ny {
                lattice2[i * ny + j] += 1;
            }
        }
    }

    let mut out = Vec::new();
    for i in 0..nx1 {
        for j in 0..ny1 {
            let count = lattice1[i * ny1 + j];
            if count > 0 {
                out.push(HexBin {
                    center_x: xmin + i as f64 * sx,
                    center_y: ymin + j as f64 * sy,
                    count,
                });
            }
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            let count = lattice2[i * ny + j];
            if count > 0 {
                out.push(HexBin {
                    center_x: xmin + (i as f64 + 0.5) * sx,
                    center_y: ymin + (j as f64 + 0.5) * sy,
                    count,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn corner_points_hit_outer_lattice() {
        let bins = hexbin(&[0.0, 1.0], &[0.0, 1.0], 2);
        assert_eq!(bins.len(), 2);
        assert!(bins.iter().all(|b| b.count == 1));
        assert!((bins[0].center_x - 0.0).abs() < 1e-8 && (bins[1].center_y - 1.0).abs() < 1e-8);
    }

    #[test]
    fn constant_data_lands_in_one_bin() {
        let bins = hexbin(&[2.0; 5], &[0.0; 5], 30);
        assert_eq!(bins.len(), 1);
        assert_eq!(bins[0].count, 5);
    }

    proptest! {
        #[test]
        fn counts_are_conserved(pts in prop::collection::vec((-50.0f64..50.0, -5.0f64..5.0), 1..200)) {
            let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            let total: usize = hexbin(&xs, &ys, 30).iter().map(|b| b.count).sum();
            prop_assert_eq!(total, xs.len());
        }
    }
}
