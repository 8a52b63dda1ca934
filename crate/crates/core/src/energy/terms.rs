use super::typing::AtomType;

/// Pairs with centre distance at or beyond this contribute nothing.
pub const CUTOFF: f64 = 8.0;

/// Default weights for `(gauss1, gauss2, repulsion, hydrophobic, hbond)`.
pub const DEFAULT_WEIGHTS: [f64; 5] = [-0.035579, -0.005156, 0.840245, -0.035069, -0.587439];

/// Surface distance `d = r − R_i − R_j`.
#[inline]
pub fn surface_distance(r: f64, ri: f64, rj: f64) -> f64 {
    r - ri - rj
}

/// Piecewise-linear ramp: 1 at or below `good`, 0 at or above `bad`.
#[inline]
fn ramp(d: f64, good: f64, bad: f64) -> f64 {
    if d <= good {
        1.0
    } else if d >= bad {
        0.0
    } else {
        (bad - d) / (bad - good)
    }
}

/// Unweighted per-pair terms at surface distance `d`.
#[inline]
pub fn pair_terms(d: f64, a: &AtomType, b: &AtomType) -> [f64; 5] {
    let g1 = (-(d / 0.5).powi(2)).exp();
    let g2 = (-((d - 3.0) / 2.0).powi(2)).exp();
    let rep = if d < 0.0 { d * d } else { 0.0 };
    let hyd = if a.hydrophobic && b.hydrophobic {
        ramp(d, 0.5, 1.5)
    } else {
        0.0
    };
    let hd = if a.hbond_pair(b) {
        ramp(d, -0.7, 0.0)
    } else {
        0.0
    };
    [g1, g2, rep, hyd, hd]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molio::Element;

    fn hydrophobic_c() -> AtomType {
        AtomType {
            hydrophobic: true,
            ..AtomType::plain(Element::C)
        }
    }

    #[test]
    fn values_at_reference_points() {
        let c = hydrophobic_c();
        let t = pair_terms(0.0, &c, &c);
        assert_eq!(t[0], 1.0);
        assert!((t[1] - (-2.25f64).exp()).abs() < 1e-15);
        assert_eq!(t[2], 0.0);
        assert_eq!(t[3], 1.0);
        assert_eq!(t[4], 0.0);
        let t = pair_terms(-0.5, &c, &c);
        assert!((t[2] - 0.25).abs() < 1e-15);
        assert!((pair_terms(1.0, &c, &c)[3] - 0.5).abs() < 1e-15);
        assert_eq!(pair_terms(1.5, &c, &c)[3], 0.0);
    }

    #[test]
    fn hbond_ramp_needs_donor_acceptor_pair() {
        let donor = AtomType {
            donor: true,
            ..AtomType::plain(Element::N)
        };
        let acceptor = AtomType {
            acceptor: true,
            ..AtomType::plain(Element::O)
        };
        assert_eq!(pair_terms(-0.7, &donor, &acceptor)[4], 1.0);
        assert!((pair_terms(-0.35, &acceptor, &donor)[4] - 0.5).abs() < 1e-15);
        assert_eq!(pair_terms(0.0, &donor, &acceptor)[4], 0.0);
        assert_eq!(pair_terms(-1.0, &donor, &donor)[4], 0.0);
    }

    #[test]
    fn weighted_discontinuity_at_cutoff_is_small() {
        // The largest radii (I, 2.2 Å) maximize gauss2 at the cutoff.
        let i = AtomType::plain(Element::I);
        let d = surface_distance(CUTOFF, i.vdw_radius, i.vdw_radius);
        let t = pair_terms(d, &i, &i);
        let weighted: f64 = t.iter().zip(DEFAULT_WEIGHTS).map(|(a, w)| a * w).sum();
        assert!(weighted.abs() < 1e-2, "{weighted}");
    }
}
