use crate::Vec3;

/// Uniform cell list over a fixed point set.
///
/// Cells are cubes with edge at least the query radius, so every point within
/// that radius of a query lies in the query's cell or one of its 26
/// neighbours.
#[derive(Debug, Clone)]
pub struct CellGrid {
    origin: Vec3,
    edge: f64,
    dims: [usize; 3],
    /// `starts[c]..starts[c + 1]` indexes `items` for cell `c`.
    starts: Vec<usize>,
    items: Vec<usize>,
}

impl CellGrid {
    pub fn new(points: &[Vec3], edge: f64) -> Self {
        assert!(edge > 0.0, "cell edge must be positive");
        let (mut lo, mut hi) = (Vec3::repeat(f64::INFINITY), Vec3::repeat(f64::NEG_INFINITY));
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if points.is_empty() {
            lo = Vec3::zeros();
            hi = Vec3::zeros();
        }
        let dims = [0, 1, 2].map(|k| (((hi[k] - lo[k]) / edge).floor() as usize) + 1);
        let n_cells = dims[0] * dims[1] * dims[2];
        let mut grid = CellGrid {
            origin: lo,
            edge,
            dims,
            starts: vec![0; n_cells + 1],
            items: vec![0; points.len()],
        };
        let cells: Vec<usize> = points
            .iter()
            .map(|p| {
                let c = grid.cell_of(p).expect("point inside its own bounding box");
                grid.flat(c)
            })
            .collect();
        for &c in &cells {
            grid.starts[c + 1] += 1;
        }
        for c in 0..n_cells {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        for (i, &c) in cells.iter().enumerate() {
            grid.items[fill[c]] = i;
            fill[c] += 1;
        }
        grid
    }

    fn cell_of(&self, p: &Vec3) -> Option<[i64; 3]> {
        let c = [0, 1, 2].map(|k| ((p[k] - self.origin[k]) / self.edge).floor() as i64);
        c.iter()
            .zip(self.dims)
            .all(|(&ci, d)| ci >= 0 && (ci as usize) < d)
            .then_some(c)
    }

    fn flat(&self, c: [i64; 3]) -> usize {
        (c[0] as usize * self.dims[1] + c[1] as usize) * self.dims[2] + c[2] as usize
    }

    /// Calls `f` with the index of every point in the 27 cells around `p`.
    /// Candidates are a superset of the points within one edge of `p`.
    pub fn for_each_candidate(&self, p: &Vec3, mut f: impl FnMut(usize)) {
        let base = [0, 1, 2].map(|k| ((p[k] - self.origin[k]) / self.edge).floor());
        if base.iter().any(|b| !b.is_finite()) {
            return;
        }
        let base = base.map(|b| b as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let c = [base[0] + dx, base[1] + dy, base[2] + dz];
                    if c.iter()
                        .zip(self.dims)
                        .any(|(&ci, d)| ci < 0 || ci as usize >= d)
                    {
                        continue;
                    }
                    let k = self.flat(c);
                    for &i in &self.items[self.starts[k]..self.starts[k + 1]] {
                        f(i);
                    }
                }
            }
        }
    }
}
