//! Stepping operator and a greedy weak-regularity refinement loop.
//!
//! `stepping` replaces values by measure-weighted block-pair averages over a
//! partition of the cells. `fk_partition` starts from the trivial partition
//! and repeatedly finds a violating rectangle S x T of the residual W - W_P
//! via the cut-norm search, splits every block by S and by T, and re-steps,
//! until the residual is at most eps, the block-count cap is hit, or the
//! found violation stops shrinking.

use crate::error::{Error, Result};
use crate::norms::{cut_norm_auto, StepKernel};
use crate::orderon::GridOrderon;
use crate::rng;
use serde::{Deserialize, Serialize};

/// Disjoint cover of a grid's cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellPartition {
    blocks: Vec<Vec<usize>>,
}

impl CellPartition {
    pub fn new(blocks: Vec<Vec<usize>>, ncells: usize) -> Result<Self> {
        let mut seen = vec![false; ncells];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::EmptyBlock("partition contains an empty block".into()));
            }
            for &c in b {
                if c >= ncells || seen[c] {
                    return Err(Error::BadPartition(format!("cell {c} missing or repeated")));
                }
                seen[c] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::BadPartition("blocks must cover all cells".into()));
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        Ok(CellPartition { blocks })
    }

    pub fn trivial(ncells: usize) -> Self {
        CellPartition { blocks: vec![(0..ncells).collect()] }
    }

    pub fn singletons(ncells: usize) -> Self {
        CellPartition { blocks: (0..ncells).map(|c| vec![c]).collect() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Split every block by membership in S and in T; empty intersections drop.
    pub fn split_by(&self, s: &[usize], t: &[usize], ncells: usize) -> CellPartition {
        let mut in_s = vec![false; ncells];
        let mut in_t = vec![false; ncells];
        for &c in s {
            in_s[c] = true;
        }
        for &c in t {
            in_t[c] = true;
        }
        let mut blocks = Vec::new();
        for b in &self.blocks {
            let mut parts: [Vec<usize>; 4] = Default::default();
            for &c in b {
                let idx = (in_s[c] as usize) << 1 | in_t[c] as usize;
                parts[idx].push(c);
            }
            for p in parts {
                if !p.is_empty() {
                    blocks.push(p);
                }
            }
        }
        blocks.sort();
        CellPartition { blocks }
    }
}

/// Measure-weighted block-pair averaging of W over P, on the same grid.
pub fn stepping(w: &GridOrderon, p: &CellPartition) -> Result<GridOrderon> {
    let n = w.ncells();
    let meas = w.grid().cell_measures();
    let mut block_of = vec![usize::MAX; n];
    for (bi, b) in p.blocks().iter().enumerate() {
        for &c in b {
            if c >= n {
                return Err(Error::BadPartition(format!("cell {c} out of range")));
            }
            block_of[c] = bi;
        }
    }
    if block_of.iter().any(|&b| b == usize::MAX) {
        return Err(Error::BadPartition("partition does not cover the grid".into()));
    }
    let nb = p.len();
    let block_mass: Vec<f64> =
        p.blocks().iter().map(|b| b.iter().map(|&c| meas[c]).sum()).collect();
    if let Some(bi) = block_mass.iter().position(|&m| m <= 0.0) {
        return Err(Error::EmptyBlock(format!("block {bi} has zero measure")));
    }
    let mut sums = vec![0.0f64; nb * nb];
    for i in 0..n {
        for j in 0..n {
            sums[block_of[i] * nb + block_of[j]] += meas[i] * meas[j] * w.value(i, j);
        }
    }
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (bi, bj) = (block_of[i], block_of[j]);
            values[i * n + j] = sums[bi * nb + bj] / (block_mass[bi] * block_mass[bj]);
        }
    }
    GridOrderon::from_flat(w.grid().clone(), values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FkReport {
    pub residual: f64,
    pub blocks: usize,
    /// Violation value found in each round, in order.
    pub violations: Vec<f64>,
}

/// Block-count cap: min(2^(ceil(1/eps^2)+3), number of cells).
pub fn fk_block_cap(eps: f64, ncells: usize) -> usize {
    let exponent = (1.0 / (eps * eps)).ceil() as u32 + 3;
    if exponent >= usize::BITS {
        ncells
    } else {
        (1usize << exponent).min(ncells)
    }
}

const FK_RESTARTS: u64 = 6;
const FK_MAX_ROUNDS: usize = 64;

/// Greedy refinement loop; returns the partition and the final residual
/// (a heuristic lower bound once the grid exceeds the exact-search cap).
pub fn fk_partition(w: &GridOrderon, eps: f64, seed: u64) -> (CellPartition, f64) {
    let (p, report) = fk_partition_detailed(w, eps, seed);
    (p, report.residual)
}

pub fn fk_partition_detailed(w: &GridOrderon, eps: f64, seed: u64) -> (CellPartition, FkReport) {
    assert!(eps > 0.0, "eps must be positive");
    let n = w.ncells();
    let cap = fk_block_cap(eps, n);
    let mut partition = CellPartition::trivial(n);
    let mut violations = Vec::new();
    let mut prev_violation = f64::INFINITY;
    for round in 0..FK_MAX_ROUNDS {
        let stepped = stepping(w, &partition).expect("partition covers the grid");
        let kernel = StepKernel::difference(w, &stepped);
        let cert = cut_norm_auto(&kernel, FK_RESTARTS, rng::derive(seed, round as u64));
        let violation = cert.value;
        violations.push(violation);
        if violation <= eps || partition.len() >= cap || violation >= prev_violation - 1e-12 {
            let report = FkReport { residual: violation, blocks: partition.len(), violations };
            return (partition, report);
        }
        prev_violation = violation;
        partition = partition.split_by(&cert.witness_s, &cert.witness_t, n);
    }
    let stepped = stepping(w, &partition).expect("partition covers the grid");
    let kernel = StepKernel::difference(w, &stepped);
    let cert = cut_norm_auto(&kernel, FK_RESTARTS, rng::derive(seed, FK_MAX_ROUNDS as u64));
    violations.push(cert.value);
    let report = FkReport { residual: cert.value, blocks: partition.len(), violations };
    (partition, report)
}
