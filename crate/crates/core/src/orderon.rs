//! Step orderons on finite column/layer grids.
//!
//! A grid splits [0,1]^2 into columns (x-intervals) and, per column, layers
//! (intervals of the second coordinate). A `GridOrderon` is a symmetric
//! function on pairs of cells with values in [0,1]. Every finite ordered
//! graph embeds as an equal-width one-layer grid, and all distances and
//! densities in this crate are computed on such step functions.

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, WeightedOrderedGraph};

/// Breakpoints closer than this are merged when grids are combined.
pub const BREAKPOINT_TOL: f64 = 1e-12;

/// Column/layer cell structure over [0,1]^2.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    xcuts: Vec<f64>,
    layers: Vec<Vec<f64>>,
    col_offsets: Vec<usize>,
    cell_col: Vec<usize>,
    cell_meas: Vec<f64>,
}

fn validate_breakpoints(cuts: &[f64], what: &str) -> Result<()> {
    if cuts.len() < 2 {
        return Err(Error::BadBreakpoints(format!("{what}: need at least two breakpoints")));
    }
    if (cuts[0] - 0.0).abs() > BREAKPOINT_TOL || (cuts[cuts.len() - 1] - 1.0).abs() > BREAKPOINT_TOL {
        return Err(Error::BadBreakpoints(format!("{what}: must start at 0 and end at 1")));
    }
    if cuts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadBreakpoints(format!("{what}: must be strictly increasing")));
    }
    Ok(())
}

impl Grid {
    pub fn new(mut xcuts: Vec<f64>, mut layers: Vec<Vec<f64>>) -> Result<Self> {
        validate_breakpoints(&xcuts, "xcuts")?;
        let m = xcuts.len() - 1;
        if layers.len() != m {
            return Err(Error::BadBreakpoints(format!(
                "have {m} columns but {} layer lists",
                layers.len()
            )));
        }
        let first = xcuts.len() - 1;
        xcuts[0] = 0.0;
        xcuts[first] = 1.0;
        for (c, l) in layers.iter_mut().enumerate() {
            validate_breakpoints(l, &format!("layers[{c}]"))?;
            let last = l.len() - 1;
            l[0] = 0.0;
            l[last] = 1.0;
        }
        let mut col_offsets = Vec::with_capacity(m + 1);
        let mut cell_col = Vec::new();
        let mut cell_meas = Vec::new();
        let mut off = 0;
        for c in 0..m {
            col_offsets.push(off);
            let w = xcuts[c + 1] - xcuts[c];
            for p in 0..layers[c].len() - 1 {
                cell_col.push(c);
                cell_meas.push(w * (layers[c][p + 1] - layers[c][p]));
            }
            off += layers[c].len() - 1;
        }
        col_offsets.push(off);
        let total: f64 = cell_meas.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadBreakpoints(format!("cell measures sum to {total}, not 1")));
        }
        Ok(Grid { xcuts, layers, col_offsets, cell_col, cell_meas })
    }

    pub fn ncols(&self) -> usize {
        self.xcuts.len() - 1
    }

    pub fn ncells(&self) -> usize {
        self.cell_col.len()
    }

    pub fn xcuts(&self) -> &[f64] {
        &self.xcuts
    }

    pub fn layers(&self) -> &[Vec<f64>] {
        &self.layers
    }

    pub fn cell_measure(&self, cell: usize) -> f64 {
        self.cell_meas[cell]
    }

    pub fn cell_measures(&self) -> &[f64] {
        &self.cell_meas
    }

    pub fn cell_column(&self, cell: usize) -> usize {
        self.cell_col[cell]
    }

    pub fn column_cells(&self, c: usize) -> std::ops::Range<usize> {
        self.col_offsets[c]..self.col_offsets[c + 1]
    }

    pub fn col_width(&self, c: usize) -> f64 {
        self.xcuts[c + 1] - self.xcuts[c]
    }

    /// Column containing x: half-open cells (x_c, x_{c+1}], with 0 mapped to
    /// the first column. Matches the index map used by graph embeddings.
    pub fn locate_col(&self, x: f64) -> usize {
        let m = self.ncols();
        if x <= self.xcuts[0] {
            return 0;
        }
        if x >= self.xcuts[m] {
            return m - 1;
        }
        // smallest c with xcuts[c+1] >= x
        let mut lo = 0;
        let mut hi = m - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.xcuts[mid + 1] >= x {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// Cell containing (x, a).
    pub fn locate(&self, x: f64, a: f64) -> usize {
        let c = self.locate_col(x);
        let l = &self.layers[c];
        let np = l.len() - 1;
        let p = if a <= l[0] {
            0
        } else if a >= l[np] {
            np - 1
        } else {
            let mut lo = 0;
            let mut hi = np - 1;
            while lo < hi {
                let mid = (lo + hi) / 2;
                if l[mid + 1] >= a {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            lo
        };
        self.col_offsets[c] + p
    }

    /// A point strictly inside the cell.
    pub fn cell_midpoint(&self, cell: usize) -> (f64, f64) {
        let c = self.cell_col[cell];
        let p = cell - self.col_offsets[c];
        let x = 0.5 * (self.xcuts[c] + self.xcuts[c + 1]);
        let a = 0.5 * (self.layers[c][p] + self.layers[c][p + 1]);
        (x, a)
    }
}

/// Sorted union of two breakpoint lists with near-duplicates merged.
pub fn union_breakpoints(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    all.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for v in all {
        if out.last().is_none_or(|&last| v - last > BREAKPOINT_TOL) {
            out.push(v);
        }
    }
    let n = out.len();
    out[0] = 0.0;
    out[n - 1] = 1.0;
    out
}

/// Step orderon: symmetric values over cell pairs of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOrderon {
    grid: Grid,
    values: Vec<f64>,
}

impl GridOrderon {
    /// Validating constructor; `values[i][j]` indexed by cell id, cells
    /// enumerated column-major then layer.
    pub fn new(xcuts: Vec<f64>, layers: Vec<Vec<f64>>, values: Vec<Vec<f64>>) -> Result<Self> {
        let grid = Grid::new(xcuts, layers)?;
        let n = grid.ncells();
        if values.len() != n || values.iter().any(|row| row.len() != n) {
            return Err(Error::BadBreakpoints(format!("values must be {n}x{n} for this grid")));
        }
        let mut flat = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = values[i][j];
                if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    return Err(Error::OutOfRangeValue(format!("values[{i}][{j}] = {v}")));
                }
                if (v - values[j][i]).abs() > 1e-12 {
                    return Err(Error::AsymmetricValues(format!("values at ({i},{j})")));
                }
                flat[i * n + j] = v.clamp(0.0, 1.0);
            }
        }
        // exact symmetry after clamping
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (flat[i * n + j] + flat[j * n + i]);
                flat[i * n + j] = v;
                flat[j * n + i] = v;
            }
        }
        Ok(GridOrderon { grid, values: flat })
    }

    pub fn from_flat(grid: Grid, values: Vec<f64>) -> Result<Self> {
        let n = grid.ncells();
        if values.len() != n * n {
            return Err(Error::BadBreakpoints(format!("values must have length {}", n * n)));
        }
        let nested: Vec<Vec<f64>> = (0..n).map(|i| values[i * n..(i + 1) * n].to_vec()).collect();
        Self::new(grid.xcuts.clone(), grid.layers.clone(), nested)
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![vec![0.0, 1.0]], vec![vec![p]])
    }

    /// The odd-clique limit: one column, layers split at 1/2, value 1 iff
    /// both points lie in the lower layer.
    pub fn odd_clique_limit() -> Self {
        Self::new(
            vec![0.0, 1.0],
            vec![vec![0.0, 0.5, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 0.0]],
        )
        .expect("valid limit orderon")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ncells(&self) -> usize {
        self.grid.ncells()
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.ncells() + j]
    }

    pub fn values_flat(&self) -> &[f64] {
        &self.values
    }

    /// Pointwise evaluation W((x,a),(y,b)).
    pub fn eval(&self, v1: (f64, f64), v2: (f64, f64)) -> f64 {
        let i = self.grid.locate(v1.0, v1.1);
        let j = self.grid.locate(v2.0, v2.1);
        self.value(i, j)
    }

    /// Integral over ([0,1]^2)^2.
    pub fn mean(&self) -> f64 {
        let n = self.ncells();
        let m = self.grid.cell_measures();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += m[i] * m[j] * self.value(i, j);
            }
        }
        s
    }

    /// Re-express this orderon on a grid that refines its own: exact function
    /// equality, values read off at cell midpoints.
    pub fn resample(&self, grid: &Grid) -> GridOrderon {
        let n = grid.ncells();
        let src: Vec<usize> = (0..n)
            .map(|i| {
                let (x, a) = grid.cell_midpoint(i);
                self.grid.locate(x, a)
            })
            .collect();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = self.value(src[i], src[j]);
            }
        }
        GridOrderon { grid: grid.clone(), values }
    }

    /// Refine so the x-breakpoints include every multiple of 1/r.
    pub fn refine_for_resolution(&self, r: usize) -> Result<GridOrderon> {
        if r == 0 {
            return Err(Error::IncompatibleResolution("resolution must be positive".into()));
        }
        let extra: Vec<f64> = (0..=r).map(|i| i as f64 / r as f64).collect();
        let xcuts = union_breakpoints(self.grid.xcuts(), &extra);
        let layers: Vec<Vec<f64>> = (0..xcuts.len() - 1)
            .map(|c| {
                let mid = 0.5 * (xcuts[c] + xcuts[c + 1]);
                self.grid.layers[self.grid.locate_col(mid)].clone()
            })
            .collect();
        let grid = Grid::new(xcuts, layers)?;
        Ok(self.resample(&grid))
    }
}

/// Embed a simple graph as its n-column one-layer step orderon; the value of
/// cell pair (i,j) is G(i,j), so the diagonal carries G(i,i) = 0.
pub fn embed(g: &OrderedGraph) -> GridOrderon {
    let n = g.n();
    let xcuts: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let layers = vec![vec![0.0, 1.0]; n];
    let grid = Grid::new(xcuts, layers).expect("uniform grid is valid");
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = if g.has_edge(i, j) { 1.0 } else { 0.0 };
        }
    }
    GridOrderon { grid, values }
}

/// Embed an edge-weighted graph the same way; weights land on the cells.
pub fn embed_weighted(g: &WeightedOrderedGraph) -> GridOrderon {
    let n = g.n();
    let xcuts: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let layers = vec![vec![0.0, 1.0]; n];
    let grid = Grid::new(xcuts, layers).expect("uniform grid is valid");
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = g.weight(i, j);
        }
    }
    GridOrderon { grid, values }
}

/// Both inputs re-expressed on one shared grid: the union of x-breakpoints
/// and, per column, the union of layer breakpoints. Each output equals its
/// input as a function.
pub fn common_refinement(w: &GridOrderon, u: &GridOrderon) -> (GridOrderon, GridOrderon) {
    let xcuts = union_breakpoints(w.grid.xcuts(), u.grid.xcuts());
    let layers: Vec<Vec<f64>> = (0..xcuts.len() - 1)
        .map(|c| {
            let mid = 0.5 * (xcuts[c] + xcuts[c + 1]);
            let lw = &w.grid.layers[w.grid.locate_col(mid)];
            let lu = &u.grid.layers[u.grid.locate_col(mid)];
            union_breakpoints(lw, lu)
        })
        .collect();
    let grid = Grid::new(xcuts, layers).expect("union of valid grids is valid");
    (w.resample(&grid), u.resample(&grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::odd_clique;
    use crate::rng::SplitMix64;

    #[test]
    fn constant_orderon() {
        let w = GridOrderon::constant(0.5).unwrap();
        assert_eq!(w.ncells(), 1);
        assert_eq!(w.eval((0.3, 0.9), (0.7, 0.1)), 0.5);
        assert!((w.mean() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_values_rejected() {
        let r = GridOrderon::new(
            vec![0.0, 0.5, 1.0],
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            vec![vec![0.0, 0.3], vec![0.7, 0.0]],
        );
        assert!(matches!(r, Err(Error::AsymmetricValues(_))));
    }

    #[test]
    fn out_of_range_and_bad_breakpoints_rejected() {
        assert!(matches!(
            GridOrderon::new(vec![0.0, 1.0], vec![vec![0.0, 1.0]], vec![vec![1.5]]),
            Err(Error::OutOfRangeValue(_))
        ));
        assert!(matches!(
            GridOrderon::new(vec![0.0, 0.5, 0.4, 1.0], vec![vec![0.0, 1.0]; 3], vec![vec![0.0; 3]; 3]),
            Err(Error::BadBreakpoints(_))
        ));
        assert!(matches!(
            GridOrderon::new(vec![0.1, 1.0], vec![vec![0.0, 1.0]], vec![vec![0.0]]),
            Err(Error::BadBreakpoints(_))
        ));
    }

    #[test]
    fn odd_clique_limit_values() {
        let w = GridOrderon::odd_clique_limit();
        assert_eq!(w.eval((0.2, 0.25), (0.9, 0.49)), 1.0);
        assert_eq!(w.eval((0.2, 0.25), (0.9, 0.51)), 0.0);
        assert_eq!(w.eval((0.2, 0.75), (0.9, 0.8)), 0.0);
        assert!((w.mean() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn embed_k2_values() {
        let k2 = OrderedGraph::complete(2).unwrap();
        let w = embed(&k2);
        assert_eq!(w.ncells(), 2);
        assert_eq!(w.value(0, 0), 0.0);
        assert_eq!(w.value(0, 1), 1.0);
        assert_eq!(w.value(1, 0), 1.0);
        assert_eq!(w.value(1, 1), 0.0);
    }

    #[test]
    fn index_map_matches_ceiling_rule() {
        // Q_4(0.5) = 2 and Q_4(0) = 1 in 1-indexed terms
        let g = OrderedGraph::empty(4).unwrap();
        let w = embed(&g);
        assert_eq!(w.grid().locate_col(0.5), 1);
        assert_eq!(w.grid().locate_col(0.0), 0);
        assert_eq!(w.grid().locate_col(0.5000001), 2);
        assert_eq!(w.grid().locate_col(1.0), 3);
    }

    #[test]
    fn embed_odd_clique_2() {
        let w = embed(&odd_clique(2));
        assert_eq!(w.grid().ncols(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if (i, j) == (0, 2) || (i, j) == (2, 0) { 1.0 } else { 0.0 };
                assert_eq!(w.value(i, j), expect);
            }
        }
    }

    #[test]
    fn embed_matches_graph_at_random_points() {
        let mut rng = SplitMix64::new(11);
        for seed in 0..5u64 {
            let g = crate::random::gnp(7, 0.4, seed);
            let w = embed(&g);
            for _ in 0..1000 {
                let (x, a) = (rng.next_f64(), rng.next_f64());
                let (y, b) = (rng.next_f64(), rng.next_f64());
                let qi = if x <= 0.0 { 0 } else { (x * 7.0).ceil() as usize - 1 };
                let qj = if y <= 0.0 { 0 } else { (y * 7.0).ceil() as usize - 1 };
                let expect = if g.has_edge(qi, qj) { 1.0 } else { 0.0 };
                assert_eq!(w.eval((x, a), (y, b)), expect);
            }
        }
    }

    #[test]
    fn refinement_idempotent_and_union() {
        let w = GridOrderon::odd_clique_limit();
        let (a, b) = common_refinement(&w, &w);
        assert_eq!(a.grid().xcuts(), w.grid().xcuts());
        assert_eq!(a, b);

        let u = GridOrderon::new(
            vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
            vec![vec![0.0, 1.0]; 3],
            vec![vec![0.1; 3]; 3],
        )
        .unwrap();
        let v = GridOrderon::new(
            vec![0.0, 0.5, 1.0],
            vec![vec![0.0, 1.0]; 2],
            vec![vec![0.2; 2]; 2],
        )
        .unwrap();
        let (ru, rv) = common_refinement(&u, &v);
        let expect = [0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0];
        assert_eq!(ru.grid().xcuts().len(), 5);
        for (got, want) in ru.grid().xcuts().iter().zip(expect.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(rv.grid().xcuts(), ru.grid().xcuts());
    }

    #[test]
    fn refinement_preserves_function() {
        let mut rng = SplitMix64::new(5);
        let w = crate::random::random_grid_orderon(3, 2, 101);
        let u = crate::random::random_grid_orderon(4, 3, 102);
        let (rw, ru) = common_refinement(&w, &u);
        for _ in 0..1000 {
            let p1 = (rng.next_f64(), rng.next_f64());
            let p2 = (rng.next_f64(), rng.next_f64());
            assert_eq!(w.eval(p1, p2), rw.eval(p1, p2));
            assert_eq!(u.eval(p1, p2), ru.eval(p1, p2));
        }
    }

    #[test]
    fn measures_sum_to_one() {
        let w = crate::random::random_grid_orderon(5, 3, 9);
        let total: f64 = w.grid().cell_measures().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
