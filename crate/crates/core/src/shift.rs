//! Searchable measure-preserving bijections of [0,1]^2.
//!
//! A `ShiftMap` permutes the r equal columns of a resolution grid and, within
//! each source column, rearranges the second coordinate by a measure-preserving
//! interval exchange. Only horizontal displacement is priced: the shift cost is
//! the largest column displacement divided by r, and vertical moves are free.

use crate::error::{Error, Result};
use crate::orderon::{union_breakpoints, Grid, GridOrderon, BREAKPOINT_TOL};
use serde::{Deserialize, Serialize};

/// One piece of an interval exchange: [src_lo, src_hi) translated to start at dst_lo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub src_lo: f64,
    pub src_hi: f64,
    pub dst_lo: f64,
}

/// Measure-preserving piecewise translation of [0,1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalExchange {
    pieces: Vec<Piece>,
}

impl IntervalExchange {
    pub fn identity() -> Self {
        IntervalExchange { pieces: vec![Piece { src_lo: 0.0, src_hi: 1.0, dst_lo: 0.0 }] }
    }

    pub fn from_pieces(mut pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::BadShiftMap("interval exchange needs pieces".into()));
        }
        pieces.sort_by(|a, b| a.src_lo.partial_cmp(&b.src_lo).expect("finite"));
        let mut cursor = 0.0;
        for p in &pieces {
            if (p.src_lo - cursor).abs() > BREAKPOINT_TOL || p.src_hi <= p.src_lo {
                return Err(Error::BadShiftMap("source pieces must tile [0,1]".into()));
            }
            cursor = p.src_hi;
        }
        if (cursor - 1.0).abs() > BREAKPOINT_TOL {
            return Err(Error::BadShiftMap("source pieces must end at 1".into()));
        }
        let mut dst: Vec<(f64, f64)> =
            pieces.iter().map(|p| (p.dst_lo, p.dst_lo + (p.src_hi - p.src_lo))).collect();
        dst.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        let mut cursor = 0.0;
        for (lo, hi) in dst {
            if (lo - cursor).abs() > BREAKPOINT_TOL {
                return Err(Error::BadShiftMap("destination pieces must tile [0,1]".into()));
            }
            cursor = hi;
        }
        if (cursor - 1.0).abs() > BREAKPOINT_TOL {
            return Err(Error::BadShiftMap("destination pieces must end at 1".into()));
        }
        Ok(IntervalExchange { pieces })
    }

    /// Exchange two disjoint sub-intervals of equal length, identity elsewhere.
    pub fn swap(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> Result<Self> {
        let len = a_hi - a_lo;
        if len <= 0.0 || (b_hi - b_lo - len).abs() > BREAKPOINT_TOL {
            return Err(Error::BadShiftMap("swap intervals must have equal positive length".into()));
        }
        if a_hi > b_lo + BREAKPOINT_TOL {
            return Err(Error::BadShiftMap("swap intervals must be disjoint with a before b".into()));
        }
        let mut pieces = Vec::new();
        let mut push = |lo: f64, hi: f64, dst: f64| {
            if hi - lo > BREAKPOINT_TOL {
                pieces.push(Piece { src_lo: lo, src_hi: hi, dst_lo: dst });
            }
        };
        push(0.0, a_lo, 0.0);
        push(a_lo, a_hi, b_lo);
        push(a_hi, b_lo, a_hi);
        push(b_lo, b_hi, a_lo);
        push(b_hi, 1.0, b_hi);
        Self::from_pieces(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|p| (p.dst_lo - p.src_lo).abs() <= BREAKPOINT_TOL)
    }

    pub fn map(&self, a: f64) -> f64 {
        for p in &self.pieces {
            if a < p.src_hi || (p.src_hi - 1.0).abs() <= BREAKPOINT_TOL {
                if a >= p.src_lo || p.src_lo <= BREAKPOINT_TOL {
                    return (p.dst_lo + (a - p.src_lo)).clamp(0.0, 1.0);
                }
            }
        }
        a
    }

    pub fn invert(&self) -> Self {
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| Piece {
                src_lo: p.dst_lo,
                src_hi: p.dst_lo + (p.src_hi - p.src_lo),
                dst_lo: p.src_lo,
            })
            .collect();
        pieces.sort_by(|a, b| a.src_lo.partial_cmp(&b.src_lo).expect("finite"));
        IntervalExchange { pieces }
    }

    /// self after `first`: (self ∘ first)(a) = self.map(first.map(a)).
    pub fn compose_after(&self, first: &IntervalExchange) -> Self {
        let mut pieces = Vec::new();
        for p in &first.pieces {
            // split p by the boundaries of self's pieces inside its destination image
            let len = p.src_hi - p.src_lo;
            let mut offsets = vec![0.0, len];
            for q in &self.pieces {
                for b in [q.src_lo, q.src_hi] {
                    let off = b - p.dst_lo;
                    if off > BREAKPOINT_TOL && off < len - BREAKPOINT_TOL {
                        offsets.push(off);
                    }
                }
            }
            offsets.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            offsets.dedup_by(|a, b| (*a - *b).abs() <= BREAKPOINT_TOL);
            for w in offsets.windows(2) {
                let mid = p.dst_lo + 0.5 * (w[0] + w[1]);
                let mapped_mid = self.map(mid);
                pieces.push(Piece {
                    src_lo: p.src_lo + w[0],
                    src_hi: p.src_lo + w[1],
                    dst_lo: mapped_mid - 0.5 * (w[1] - w[0]),
                });
            }
        }
        Self::from_pieces(pieces).expect("composition of valid exchanges")
    }
}

/// Column permutation at a fixed resolution plus free per-column vertical
/// rearrangements. `colperm[c]` is the destination column of source column c.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftMap {
    resolution: usize,
    colperm: Vec<usize>,
    layerperms: Vec<IntervalExchange>,
}

impl ShiftMap {
    pub fn identity(resolution: usize) -> Result<Self> {
        Self::new(
            resolution,
            (0..resolution).collect(),
            vec![IntervalExchange::identity(); resolution],
        )
    }

    pub fn new(resolution: usize, colperm: Vec<usize>, layerperms: Vec<IntervalExchange>) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::BadShiftMap("resolution must be positive".into()));
        }
        if colperm.len() != resolution || layerperms.len() != resolution {
            return Err(Error::BadShiftMap("colperm and layerperms must have length r".into()));
        }
        let mut seen = vec![false; resolution];
        for &d in &colperm {
            if d >= resolution || seen[d] {
                return Err(Error::BadShiftMap("colperm must be a bijection of [r]".into()));
            }
            seen[d] = true;
        }
        Ok(ShiftMap { resolution, colperm, layerperms })
    }

    pub fn from_colperm(resolution: usize, colperm: Vec<usize>) -> Result<Self> {
        let perms = vec![IntervalExchange::identity(); resolution];
        Self::new(resolution, colperm, perms)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn colperm(&self) -> &[usize] {
        &self.colperm
    }

    pub fn layerperms(&self) -> &[IntervalExchange] {
        &self.layerperms
    }

    pub fn set_layerperm(&mut self, col: usize, v: IntervalExchange) {
        self.layerperms[col] = v;
    }

    /// Largest horizontal displacement: max_c |c - colperm(c)| / r.
    pub fn shift_cost(&self) -> f64 {
        let max_disp = self
            .colperm
            .iter()
            .enumerate()
            .map(|(c, &d)| c.abs_diff(d))
            .max()
            .unwrap_or(0);
        max_disp as f64 / self.resolution as f64
    }

    #[inline]
    fn coarse_col(&self, x: f64) -> usize {
        let c = (x * self.resolution as f64).floor() as usize;
        c.min(self.resolution - 1)
    }

    /// f(x, a).
    pub fn map_point(&self, x: f64, a: f64) -> (f64, f64) {
        let c = self.coarse_col(x);
        let dx = (self.colperm[c] as f64 - c as f64) / self.resolution as f64;
        ((x + dx).clamp(0.0, 1.0), self.layerperms[c].map(a))
    }

    /// self after `first`: (self ∘ first)(v) = self.map(first.map(v)).
    pub fn compose_after(&self, first: &ShiftMap) -> Result<ShiftMap> {
        if self.resolution != first.resolution {
            return Err(Error::IncompatibleResolution(format!(
                "cannot compose shift maps at resolutions {} and {}",
                self.resolution, first.resolution
            )));
        }
        let r = self.resolution;
        let colperm: Vec<usize> = (0..r).map(|c| self.colperm[first.colperm[c]]).collect();
        let layerperms: Vec<IntervalExchange> = (0..r)
            .map(|c| self.layerperms[first.colperm[c]].compose_after(&first.layerperms[c]))
            .collect();
        ShiftMap::new(r, colperm, layerperms)
    }

    pub fn invert(&self) -> ShiftMap {
        let r = self.resolution;
        let mut colperm = vec![0; r];
        let mut layerperms = vec![IntervalExchange::identity(); r];
        for c in 0..r {
            colperm[self.colperm[c]] = c;
            layerperms[self.colperm[c]] = self.layerperms[c].invert();
        }
        ShiftMap { resolution: r, colperm, layerperms }
    }

    pub fn is_identity(&self) -> bool {
        self.colperm.iter().enumerate().all(|(c, &d)| c == d)
            && self.layerperms.iter().all(|v| v.is_identity())
    }
}

fn resolution_breakpoints_present(w: &GridOrderon, r: usize) -> bool {
    let xcuts = w.grid().xcuts();
    (0..=r).all(|i| {
        let target = i as f64 / r as f64;
        xcuts.iter().any(|&x| (x - target).abs() <= BREAKPOINT_TOL)
    })
}

/// W^f((x,a),(y,b)) = W(f(x,a), f(y,b)) as a step orderon. Requires W's
/// x-breakpoints to refine the map's resolution grid; use
/// `GridOrderon::refine_for_resolution` first otherwise.
pub fn apply_shift(w: &GridOrderon, f: &ShiftMap) -> Result<GridOrderon> {
    let r = f.resolution();
    if !resolution_breakpoints_present(w, r) {
        return Err(Error::IncompatibleResolution(format!(
            "x-breakpoints do not refine the resolution-{r} grid"
        )));
    }
    let rw = 1.0 / r as f64;
    let src_xcuts = w.grid().xcuts();

    // preimage x-breakpoints: breakpoints of W inside destination column
    // colperm[c], translated back into source column c
    let mut xcuts: Vec<f64> = vec![0.0];
    for c in 0..r {
        let d = f.colperm()[c];
        let (dlo, dhi) = (d as f64 * rw, (d + 1) as f64 * rw);
        let delta = (c as f64 - d as f64) * rw;
        for &x in src_xcuts {
            if x > dlo + BREAKPOINT_TOL && x < dhi - BREAKPOINT_TOL {
                xcuts.push(x + delta);
            }
        }
        xcuts.push((c + 1) as f64 * rw);
    }
    let xcuts = union_breakpoints(&xcuts, &[0.0, 1.0]);

    // per new fine column: pull the mapped column's layer breakpoints back
    // through the vertical exchange
    let mut layers: Vec<Vec<f64>> = Vec::with_capacity(xcuts.len() - 1);
    for ci in 0..xcuts.len() - 1 {
        let mx = 0.5 * (xcuts[ci] + xcuts[ci + 1]);
        let c = f.coarse_col(mx);
        let d = f.colperm()[c];
        let mapped_x = mx + (d as f64 - c as f64) * rw;
        let src_col = w.grid().locate_col(mapped_x);
        let src_layers = &w.grid().layers()[src_col];
        let v = &f.layerperms()[c];
        let mut cuts: Vec<f64> = Vec::new();
        for p in v.pieces() {
            cuts.push(p.src_lo);
            cuts.push(p.src_hi);
            let len = p.src_hi - p.src_lo;
            for &l in src_layers {
                let off = l - p.dst_lo;
                if off > BREAKPOINT_TOL && off < len - BREAKPOINT_TOL {
                    cuts.push(p.src_lo + off);
                }
            }
        }
        layers.push(union_breakpoints(&cuts, &[0.0, 1.0]));
    }

    let grid = Grid::new(xcuts, layers)?;
    let n = grid.ncells();
    let mapped: Vec<usize> = (0..n)
        .map(|i| {
            let (x, a) = grid.cell_midpoint(i);
            let (mx, ma) = f.map_point(x, a);
            w.grid().locate(mx, ma)
        })
        .collect();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = w.value(mapped[i], mapped[j]);
        }
    }
    GridOrderon::from_flat(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::l1_distance;
    use crate::orderon::GridOrderon;
    use crate::rng::SplitMix64;

    fn random_shift_map(r: usize, seed: u64) -> ShiftMap {
        let mut rng = SplitMix64::new(seed);
        // random permutation
        let mut perm: Vec<usize> = (0..r).collect();
        for i in (1..r).rev() {
            let j = rng.next_below((i + 1) as u64) as usize;
            perm.swap(i, j);
        }
        let mut f = ShiftMap::from_colperm(r, perm).unwrap();
        for c in 0..r {
            if rng.next_bool(0.5) {
                // swap [0, 1/4) with [1/2, 3/4)
                f.set_layerperm(c, IntervalExchange::swap(0.0, 0.25, 0.5, 0.75).unwrap());
            }
        }
        f
    }

    #[test]
    fn identity_leaves_orderon_unchanged() {
        let w = crate::random::random_grid_orderon(4, 2, 3);
        let w4 = w.refine_for_resolution(4).unwrap();
        let out = apply_shift(&w4, &ShiftMap::identity(4).unwrap()).unwrap();
        assert!(l1_distance(&w4, &out) < 1e-12);
    }

    #[test]
    fn swapping_equal_constant_columns_is_noop() {
        let w = GridOrderon::new(
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
            vec![vec![0.0, 1.0]; 4],
            vec![
                vec![0.3, 0.3, 0.7, 0.7],
                vec![0.3, 0.3, 0.7, 0.7],
                vec![0.7, 0.7, 0.1, 0.1],
                vec![0.7, 0.7, 0.1, 0.1],
            ],
        )
        .unwrap();
        let f = ShiftMap::from_colperm(4, vec![1, 0, 2, 3]).unwrap();
        let out = apply_shift(&w, &f).unwrap();
        assert!(l1_distance(&w, &out) < 1e-12);
    }

    #[test]
    fn pointwise_oracle() {
        let mut rng = SplitMix64::new(21);
        for seed in 0..5u64 {
            let w = crate::random::random_grid_orderon(4, 3, 200 + seed);
            let w4 = w.refine_for_resolution(4).unwrap();
            let f = random_shift_map(4, 300 + seed);
            let out = apply_shift(&w4, &f).unwrap();
            for _ in 0..1000 {
                let p1 = (rng.next_f64(), rng.next_f64());
                let p2 = (rng.next_f64(), rng.next_f64());
                let m1 = f.map_point(p1.0, p1.1);
                let m2 = f.map_point(p2.0, p2.1);
                assert_eq!(out.eval(p1, p2), w4.eval(m1, m2));
            }
        }
    }

    #[test]
    fn incompatible_resolution_rejected() {
        let w = GridOrderon::new(
            vec![0.0, 1.0 / 3.0, 1.0],
            vec![vec![0.0, 1.0]; 2],
            vec![vec![0.5; 2]; 2],
        )
        .unwrap();
        let f = ShiftMap::identity(4).unwrap();
        assert!(matches!(apply_shift(&w, &f), Err(Error::IncompatibleResolution(_))));
        let refined = w.refine_for_resolution(4).unwrap();
        assert!(apply_shift(&refined, &f).is_ok());
    }

    #[test]
    fn shift_cost_and_composition() {
        let f = ShiftMap::from_colperm(4, vec![1, 0, 2, 3]).unwrap();
        assert!((f.shift_cost() - 0.25).abs() < 1e-15);
        assert_eq!(ShiftMap::identity(5).unwrap().shift_cost(), 0.0);

        let mut rng = SplitMix64::new(77);
        for _ in 0..30 {
            let a = random_shift_map(6, rng.next_u64());
            let b = random_shift_map(6, rng.next_u64());
            let c = a.compose_after(&b).unwrap();
            assert!(c.shift_cost() <= a.shift_cost() + b.shift_cost() + 1e-12);
        }
    }

    #[test]
    fn composition_matches_pointwise() {
        let mut rng = SplitMix64::new(88);
        let a = random_shift_map(5, 1);
        let b = random_shift_map(5, 2);
        let c = a.compose_after(&b).unwrap();
        for _ in 0..500 {
            let (x, y) = (rng.next_f64(), rng.next_f64());
            let via_c = c.map_point(x, y);
            let step = b.map_point(x, y);
            let via_ab = a.map_point(step.0, step.1);
            assert!((via_c.0 - via_ab.0).abs() < 1e-9 && (via_c.1 - via_ab.1).abs() < 1e-9);
        }
    }

    #[test]
    fn exchange_inverse_roundtrip() {
        let v = IntervalExchange::swap(0.1, 0.3, 0.6, 0.8).unwrap();
        let inv = v.invert();
        let mut rng = SplitMix64::new(9);
        for _ in 0..500 {
            let a = rng.next_f64();
            assert!((inv.map(v.map(a)) - a).abs() < 1e-9);
        }
    }
}
