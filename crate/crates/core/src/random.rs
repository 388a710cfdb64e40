//! Seeded graph generators: orderon samples, Erdős–Rényi, consecutive
//! stochastic block models.
//!
//! All generators are pure functions of their arguments and seed. The PRNG
//! consumption order is fixed: for a k-point orderon sample, first the k
//! position draws, then the k layer draws, then the C(k,2) edge coins in
//! lexicographic pair order.

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, WeightedOrderedGraph};
use crate::orderon::GridOrderon;
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};

/// Consecutive stochastic block model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    pub m: usize,
    pub p: Vec<Vec<f64>>,
    pub q: Vec<f64>,
}

impl SbmSpec {
    pub fn new(p: Vec<Vec<f64>>, q: Vec<f64>) -> Result<Self> {
        let m = p.len();
        if m == 0 {
            return Err(Error::BadSpec("block count must be positive".into()));
        }
        if p.iter().any(|row| row.len() != m) {
            return Err(Error::BadSpec("probability matrix must be square".into()));
        }
        for i in 0..m {
            for j in 0..m {
                if !(0.0..=1.0).contains(&p[i][j]) {
                    return Err(Error::BadSpec(format!("p[{i}][{j}] out of [0,1]")));
                }
                if (p[i][j] - p[j][i]).abs() > 1e-12 {
                    return Err(Error::BadSpec("probability matrix must be symmetric".into()));
                }
            }
        }
        if q.len() != m {
            return Err(Error::BadSpec("q must have one entry per block".into()));
        }
        if q.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::BadSpec("q entries must lie in [0,1]".into()));
        }
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::BadSpec(format!("q sums to {total}, not 1")));
        }
        Ok(SbmSpec { m, p, q })
    }

    /// Uniform block probabilities 1/M.
    pub fn uniform(p: Vec<Vec<f64>>) -> Result<Self> {
        let m = p.len();
        Self::new(p, vec![1.0 / m as f64; m])
    }

    /// 0/1 staircase: blocks i and j (1-indexed) connect iff i + j >= M + 1.
    pub fn staircase(m: usize) -> Result<Self> {
        let p: Vec<Vec<f64>> = (1..=m)
            .map(|i| (1..=m).map(|j| if i + j >= m + 1 { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::uniform(p)
    }
}

/// The random ordered graph G(k, W): k uniform points of [0,1]^2 sorted by
/// first coordinate, each pair joined independently with probability given
/// by W at the two points.
pub fn sample_graph(k: usize, w: &GridOrderon, seed: u64) -> OrderedGraph {
    assert!(k >= 1);
    let mut rng = SplitMix64::new(seed);
    let pts = sample_points(k, &mut rng);
    let mut edges = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let p = w.eval(pts[i], pts[j]);
            if rng.next_bool(p) {
                edges.push((i, j));
            }
        }
    }
    OrderedGraph::from_edges(k, &edges).expect("generated edges are valid")
}

/// The weighted variant H(k, W): same points, edge weights are the values of
/// W itself.
pub fn sample_weighted(k: usize, w: &GridOrderon, seed: u64) -> WeightedOrderedGraph {
    assert!(k >= 1);
    let mut rng = SplitMix64::new(seed);
    let pts = sample_points(k, &mut rng);
    let mut weights = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                weights[i * k + j] = w.eval(pts[i], pts[j]);
            }
        }
    }
    WeightedOrderedGraph::new(k, weights).expect("weights lie in [0,1]")
}

fn sample_points(k: usize, rng: &mut SplitMix64) -> Vec<(f64, f64)> {
    let mut zs: Vec<(f64, usize)> = (0..k).map(|i| (rng.next_f64(), i)).collect();
    // stable order: ties broken by draw index
    zs.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
    let ys: Vec<f64> = (0..k).map(|_| rng.next_f64()).collect();
    zs.iter().zip(ys).map(|(&(x, _), y)| (x, y)).collect()
}

/// Erdős–Rényi with the vertex order, each pair independently an edge with
/// probability p; pairs consumed in lexicographic order.
pub fn gnp(n: usize, p: f64, seed: u64) -> OrderedGraph {
    assert!(n >= 1);
    assert!((0.0..=1.0).contains(&p));
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.next_bool(p) {
                edges.push((u, v));
            }
        }
    }
    OrderedGraph::from_edges(n, &edges).expect("generated edges are valid")
}

fn sbm_from_block_sizes(n: usize, spec: &SbmSpec, sizes: &[usize], rng: &mut SplitMix64) -> OrderedGraph {
    let mut block_of = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, s));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.next_bool(spec.p[block_of[u]][block_of[v]]) {
                edges.push((u, v));
            }
        }
    }
    OrderedGraph::from_edges(n, &edges).expect("generated edges are valid")
}

/// Consecutive SBM: vertices assigned to blocks independently with
/// probabilities q, blocks occupy consecutive ranges of the vertex order.
pub fn sbm_consecutive(n: usize, spec: &SbmSpec, seed: u64) -> Result<OrderedGraph> {
    if n == 0 {
        return Err(Error::BadSpec("n must be positive".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut sizes = vec![0usize; spec.m];
    for _ in 0..n {
        let u = rng.next_f64();
        let mut acc = 0.0;
        let mut b = spec.m - 1;
        for (i, &qi) in spec.q.iter().enumerate() {
            acc += qi;
            if u < acc {
                b = i;
                break;
            }
        }
        sizes[b] += 1;
    }
    Ok(sbm_from_block_sizes(n, spec, &sizes, &mut rng))
}

/// Variant with exact block sizes round(q_i n), residual vertices assigned to
/// the largest-remainder blocks deterministically.
pub fn sbm_consecutive_exact(n: usize, spec: &SbmSpec, seed: u64) -> Result<OrderedGraph> {
    if n == 0 {
        return Err(Error::BadSpec("n must be positive".into()));
    }
    let mut sizes: Vec<usize> = spec.q.iter().map(|&qi| (qi * n as f64).floor() as usize).collect();
    let mut remainders: Vec<(f64, usize)> = spec
        .q
        .iter()
        .enumerate()
        .map(|(i, &qi)| (qi * n as f64 - sizes[i] as f64, i))
        .collect();
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite").then(a.1.cmp(&b.1)));
    let assigned: usize = sizes.iter().sum();
    for k in 0..n - assigned {
        sizes[remainders[k % spec.m].1] += 1;
    }
    let mut rng = SplitMix64::new(seed);
    Ok(sbm_from_block_sizes(n, spec, &sizes, &mut rng))
}

/// Random step orderon for tests and experiments: `ncols` columns at uniform
/// random breakpoints, up to `max_layers` layers per column, iid values.
pub fn random_grid_orderon(ncols: usize, max_layers: usize, seed: u64) -> GridOrderon {
    let mut rng = SplitMix64::new(seed);
    let mut xcuts = vec![0.0, 1.0];
    while xcuts.len() < ncols + 1 {
        let x = 0.05 + 0.9 * rng.next_f64();
        if xcuts.iter().all(|&y| (y - x).abs() > 0.02) {
            xcuts.push(x);
        }
    }
    xcuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut layers = Vec::with_capacity(ncols);
    for _ in 0..ncols {
        let nl = 1 + rng.next_below(max_layers as u64) as usize;
        let mut l = vec![0.0, 1.0];
        while l.len() < nl + 1 {
            let a = 0.05 + 0.9 * rng.next_f64();
            if l.iter().all(|&y| (y - a).abs() > 0.02) {
                l.push(a);
            }
        }
        l.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        layers.push(l);
    }
    let ncells: usize = layers.iter().map(|l| l.len() - 1).sum();
    let mut values = vec![vec![0.0; ncells]; ncells];
    for i in 0..ncells {
        for j in i..ncells {
            let v = rng.next_f64();
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    GridOrderon::new(xcuts, layers, values).expect("constructed grid is valid")
}
