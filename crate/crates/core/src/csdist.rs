//! Certified upper and lower bounds on the cut-shift distance
//! inf_f ( Shift(f) + ||W - U^f||_cut ).
//!
//! Any searched map yields a valid upper bound because the distance is an
//! infimum. The search family is column permutations at a chosen resolution
//! (priced by their largest displacement) composed with free per-column
//! vertical rearrangements. Lower bounds come from density differences: the
//! counting inequality |t(F,W) - t(F,U)| <= 6 k! C(k,2) sqrt(d) rearranges to
//! d >= (|Δt| / (6 k! C(k,2)))^2.

use crate::density::t_orderon;
use crate::error::Result;
use crate::graph::{PatternGraph, DEFAULT_K_MAX};
use crate::norms::{cut_norm_exact, cut_norm_heuristic, l1_distance, StepKernel};
use crate::orderon::{common_refinement, GridOrderon, BREAKPOINT_TOL};
use crate::rng::{self, SplitMix64};
use crate::shift::{apply_shift, IntervalExchange, ShiftMap};
use serde::{Deserialize, Serialize};

/// Exhaustive column-permutation search is used up to this resolution.
pub const EXHAUSTIVE_RESOLUTION_CAP: usize = 10;
const MAX_ENUMERATED_PERMS: usize = 100_000;
const INNER_EXACT_CAP: usize = 16;
const INNER_RESTARTS: u64 = 4;
/// How many of the best column permutations get the (pricier) greedy
/// vertical-rearrangement pass.
const LAYER_SEARCH_CANDIDATES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsDistanceBounds {
    pub upper: f64,
    pub upper_witness: ShiftMap,
    pub lower: f64,
    pub lower_witness: PatternGraph,
}

fn inner_norm(kernel: &StepKernel, seed: u64) -> f64 {
    if kernel.ncells() <= INNER_EXACT_CAP {
        cut_norm_exact(kernel).expect("within cap").value
    } else {
        cut_norm_heuristic(kernel, INNER_RESTARTS, seed).value
    }
}

/// All permutations of [r] with max displacement <= dmax, none beyond the cap.
fn bounded_displacement_perms(r: usize, dmax: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; r];
    let mut used = vec![false; r];
    fn recurse(
        pos: usize,
        r: usize,
        dmax: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        if out.len() > MAX_ENUMERATED_PERMS {
            return false;
        }
        if pos == r {
            out.push(perm.clone());
            return true;
        }
        let lo = pos.saturating_sub(dmax);
        let hi = (pos + dmax).min(r - 1);
        for d in lo..=hi {
            if !used[d] {
                used[d] = true;
                perm[pos] = d;
                let ok = recurse(pos + 1, r, dmax, perm, used, out);
                used[d] = false;
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    if recurse(0, r, dmax, &mut perm, &mut used, &mut out) {
        Some(out)
    } else {
        None
    }
}

fn max_displacement(perm: &[usize]) -> usize {
    perm.iter().enumerate().map(|(i, &d)| i.abs_diff(d)).max().unwrap_or(0)
}

/// Hill climb over transpositions for resolutions beyond the exhaustive cap.
fn hill_climb_perms(r: usize, dmax: usize, seed: u64, proposals: usize) -> Vec<Vec<usize>> {
    let mut rng = SplitMix64::new(seed);
    let mut out = vec![(0..r).collect::<Vec<usize>>()];
    let mut current: Vec<usize> = (0..r).collect();
    for _ in 0..proposals {
        let i = rng.next_below(r as u64) as usize;
        let j = rng.next_below(r as u64) as usize;
        if i == j {
            continue;
        }
        let mut cand = current.clone();
        cand.swap(i, j);
        if max_displacement(&cand) <= dmax {
            current = cand.clone();
            out.push(cand);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Equal-height vertical slot swaps within each coarse column that reduce the
/// L1 distance to the target. Zero shift cost; greedy, bounded passes.
fn greedy_layer_moves(
    target: &GridOrderon,
    current: &GridOrderon,
    base_map: &ShiftMap,
) -> (GridOrderon, ShiftMap) {
    let r = base_map.resolution();
    let mut u = current.clone();
    let mut map = base_map.clone();
    let mut l1 = l1_distance(target, &u);
    if l1 <= 1e-12 {
        return (u, map);
    }
    for _pass in 0..2 {
        let mut improved = false;
        for c in 0..r {
            // slot grid: union of layer breakpoints of fine columns inside c
            let (clo, chi) = (c as f64 / r as f64, (c + 1) as f64 / r as f64);
            let mut slots: Vec<f64> = vec![0.0, 1.0];
            let g = u.grid();
            for col in 0..g.ncols() {
                let mid = 0.5 * (g.xcuts()[col] + g.xcuts()[col + 1]);
                if mid > clo && mid < chi {
                    for &b in &g.layers()[col] {
                        if slots.iter().all(|&s| (s - b).abs() > BREAKPOINT_TOL) {
                            slots.push(b);
                        }
                    }
                }
            }
            slots.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            if slots.len() > 8 {
                continue;
            }
            let heights: Vec<(f64, f64)> = slots.windows(2).map(|w| (w[0], w[1])).collect();
            for i in 0..heights.len() {
                for j in (i + 1)..heights.len() {
                    let (alo, ahi) = heights[i];
                    let (blo, bhi) = heights[j];
                    if ((ahi - alo) - (bhi - blo)).abs() > 1e-9 {
                        continue;
                    }
                    let Ok(swap) = IntervalExchange::swap(alo, ahi, blo, bhi) else {
                        continue;
                    };
                    let mut vmove = ShiftMap::identity(r).expect("r >= 1");
                    vmove.set_layerperm(c, swap);
                    let Ok(candidate) = apply_shift(&u, &vmove) else {
                        continue;
                    };
                    let cand_l1 = l1_distance(target, &candidate);
                    if cand_l1 < l1 - 1e-12 {
                        l1 = cand_l1;
                        u = candidate;
                        map = map.compose_after(&vmove).expect("equal resolutions");
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    (u, map)
}

/// Upper bound: min over searched maps f of shift_cost(f) + ||W - U^f||.
/// Exhaustive over bounded-displacement column permutations for r <= 10,
/// seeded hill climb beyond; vertical rearrangements searched greedily.
pub fn cs_upper(
    w: &GridOrderon,
    u: &GridOrderon,
    resolution: usize,
    shift_budget: f64,
    seed: u64,
) -> (f64, ShiftMap) {
    let r = resolution.max(1);
    let rw = w.refine_for_resolution(r).expect("positive resolution");
    let ru = u.refine_for_resolution(r).expect("positive resolution");
    let (rw, ru) = common_refinement(&rw, &ru);
    let dmax = ((shift_budget * r as f64) + 1e-9).floor() as usize;

    let perms = if r <= EXHAUSTIVE_RESOLUTION_CAP {
        bounded_displacement_perms(r, dmax.min(r - 1))
            .unwrap_or_else(|| hill_climb_perms(r, dmax, rng::derive(seed, 0), 50 * r))
    } else {
        hill_climb_perms(r, dmax.min(r - 1), rng::derive(seed, 0), 50 * r)
    };
    let mut ordered: Vec<(usize, Vec<usize>)> =
        perms.into_iter().map(|p| (max_displacement(&p), p)).collect();
    ordered.sort();

    // pass 1: column permutations only, best candidates kept
    let mut scored: Vec<(f64, ShiftMap)> = Vec::new();
    let mut best_value = f64::INFINITY;
    for (k, (disp, perm)) in ordered.into_iter().enumerate() {
        let shift = disp as f64 / r as f64;
        if shift >= best_value {
            break; // candidates are sorted by displacement
        }
        let map = ShiftMap::from_colperm(r, perm).expect("valid permutation");
        let shifted = apply_shift(&ru, &map).expect("grid refines resolution");
        let kernel = StepKernel::difference(&rw, &shifted);
        let norm = inner_norm(&kernel, rng::derive(seed, 1 + k as u64));
        let value = shift + norm;
        best_value = best_value.min(value);
        scored.push((value, map));
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));

    // pass 2: free vertical rearrangements for the leading candidates
    let mut best_value = f64::INFINITY;
    let mut best_map = ShiftMap::identity(r).expect("r >= 1");
    for (k, (value, map)) in scored.into_iter().enumerate() {
        if k >= LAYER_SEARCH_CANDIDATES && value >= best_value {
            break;
        }
        let shift = map.shift_cost();
        let (final_map, norm) = if k < LAYER_SEARCH_CANDIDATES {
            let shifted = apply_shift(&ru, &map).expect("grid refines resolution");
            let (improved, improved_map) = greedy_layer_moves(&rw, &shifted, &map);
            let kernel = StepKernel::difference(&rw, &improved);
            (improved_map, inner_norm(&kernel, rng::derive(seed, 1 + k as u64)))
        } else {
            (map, value - shift)
        };
        let value = shift + norm;
        if value < best_value {
            best_value = value;
            best_map = final_map;
        }
    }
    (best_value, best_map)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Lower bound from the counting inequality, maximized over all patterns with
/// 2 <= k <= k_max; the maximizing pattern is the witness.
pub fn cs_lower(w: &GridOrderon, u: &GridOrderon, k_max: usize) -> Result<(f64, PatternGraph)> {
    let cap = k_max.min(DEFAULT_K_MAX);
    let mut best = (0.0f64, PatternGraph::empty(1));
    for k in 2..=cap {
        let denom = 6.0 * factorial(k) * (k * (k - 1) / 2) as f64;
        for f in PatternGraph::all(k) {
            let dt = (t_orderon(&f, w)?.value - t_orderon(&f, u)?.value).abs();
            let bound = (dt / denom).powi(2);
            if bound > best.0 {
                best = (bound, f);
            }
        }
    }
    Ok(best)
}

/// Both bounds packaged with their witnesses.
pub fn cs_bounds(
    w: &GridOrderon,
    u: &GridOrderon,
    resolution: usize,
    shift_budget: f64,
    k_max: usize,
    seed: u64,
) -> Result<CsDistanceBounds> {
    let (upper, upper_witness) = cs_upper(w, u, resolution, shift_budget, seed);
    let (lower, lower_witness) = cs_lower(w, u, k_max)?;
    Ok(CsDistanceBounds { upper, upper_witness, lower, lower_witness })
}
