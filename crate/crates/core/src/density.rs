//! Ordered induced-subgraph densities, exact and Monte Carlo.
//!
//! t(F, G) is the probability that k vertices of G picked uniformly with
//! repetition, sorted into order, induce exactly the pattern F (repeated
//! picks of one vertex induce a non-edge). t(F, W) is the same probability
//! for a k-point sample from a step orderon. Both are computed exactly by
//! enumeration over column-nondecreasing assignments with multiplicity
//! weights; the Monte Carlo route samples the generative model directly.

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, PatternGraph, DEFAULT_K_MAX};
use crate::orderon::GridOrderon;
use crate::random::sample_graph;
use crate::rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityMethod {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub value: f64,
    pub method: DensityMethod,
    pub trials: u64,
    pub stderr: f64,
}

impl DensityReport {
    fn exact(value: f64) -> Self {
        DensityReport { value, method: DensityMethod::Exact, trials: 0, stderr: 0.0 }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn check_pattern_size(k: usize) -> Result<()> {
    if k > DEFAULT_K_MAX {
        return Err(Error::PatternTooLarge { k, cap: DEFAULT_K_MAX });
    }
    Ok(())
}

/// Exact probability that a sorted uniform k-sample (with repetition) of G's
/// vertices induces the pattern F.
pub fn t_graph(f: &PatternGraph, g: &OrderedGraph) -> Result<DensityReport> {
    let k = f.k();
    check_pattern_size(k)?;
    let n = g.n();

    // DFS over nondecreasing vertex assignments; weight of an assignment with
    // per-vertex repetition counts r_v is k! n^{-k} prod 1/r_v!.
    struct State<'a> {
        f: &'a PatternGraph,
        g: &'a OrderedGraph,
        k: usize,
        assign: Vec<usize>,
        total: f64,
    }
    fn recurse(s: &mut State, pos: usize, min_vertex: usize, run: usize, weight: f64) {
        if pos == s.k {
            s.total += weight;
            return;
        }
        for v in min_vertex..s.g.n() {
            // extending with v: check pattern terms against earlier positions
            let mut ok = true;
            for i in 0..pos {
                let u = s.assign[i];
                let has = u != v && s.g.has_edge(u, v);
                if has != s.f.has_edge(i, pos) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let new_run = if pos > 0 && s.assign[pos - 1] == v { run + 1 } else { 1 };
            let w = weight / new_run as f64;
            s.assign[pos] = v;
            recurse(s, pos + 1, v, new_run, w);
        }
    }

    let mut state = State { f, g, k, assign: vec![0; k], total: 0.0 };
    let base = factorial(k) / (n as f64).powi(k as i32);
    recurse(&mut state, 0, 0, 0, base);
    Ok(DensityReport::exact(state.total))
}

/// Exact probability that a k-point sample from the step orderon W induces F.
pub fn t_orderon(f: &PatternGraph, w: &GridOrderon) -> Result<DensityReport> {
    let k = f.k();
    check_pattern_size(k)?;

    struct State<'a> {
        f: &'a PatternGraph,
        w: &'a GridOrderon,
        k: usize,
        assign: Vec<usize>,
        total: f64,
    }
    fn recurse(s: &mut State, pos: usize, min_cell: usize, run: usize, weight: f64) {
        if pos == s.k {
            s.total += weight;
            return;
        }
        for cell in min_cell..s.w.ncells() {
            let mut term = weight * s.w.grid().cell_measure(cell);
            let same_col = pos > 0
                && s.w.grid().cell_column(s.assign[pos - 1]) == s.w.grid().cell_column(cell);
            let new_run = if same_col { run + 1 } else { 1 };
            term /= new_run as f64;
            let mut ok = term != 0.0;
            if ok {
                for i in 0..pos {
                    let v = s.w.value(s.assign[i], cell);
                    term *= if s.f.has_edge(i, pos) { v } else { 1.0 - v };
                    if term == 0.0 {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            s.assign[pos] = cell;
            // next position may reuse any cell of this column or move right
            let next_min = s.w.grid().column_cells(s.w.grid().cell_column(cell)).start;
            recurse(s, pos + 1, next_min, new_run, term);
        }
    }

    let mut state = State { f, w, k, assign: vec![0; k], total: 0.0 };
    recurse(&mut state, 0, 0, 0, 1.0);
    Ok(DensityReport::exact(factorial(k) * state.total))
}

/// Fraction of seeded samples G(k,W) that equal F. Trials are evaluated with
/// per-trial seeds derive(seed, i), so parallel and sequential runs agree.
pub fn t_montecarlo(f: &PatternGraph, w: &GridOrderon, trials: u64, seed: u64) -> DensityReport {
    let k = f.k();
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let g = sample_graph(k, w, rng::derive(seed, i));
            u64::from(f.matches(&g))
        })
        .sum();
    let value = hits as f64 / trials as f64;
    DensityReport {
        value,
        method: DensityMethod::MonteCarlo,
        trials,
        stderr: (value * (1.0 - value) / trials as f64).sqrt(),
    }
}
