//! The clique-prefix/empty-suffix hereditary property, general forbidden
//! ordered-subgraph families, exact edit distances, closure checks, a
//! one-sided sample tester, and parameter estimation.
//!
//! A graph satisfies the threshold property iff there is a threshold i such
//! that the first i vertices form a clique and the last n-i an independent
//! set; equivalently, no vertices u1 < u2 <= u3 < u4 have u1u2 a non-edge
//! and u3u4 an edge. Edit distances divide by C(n,2).

use crate::density::t_orderon;
use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, PatternGraph};
use crate::orderon::GridOrderon;
use crate::rng::{self, SplitMix64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Budget for brute-force forbidden-family membership: sum over the family of
/// n^k assignments.
pub const FORBIDDEN_SEARCH_BUDGET: f64 = 2e7;

/// Hereditary property given by a finite forbidden family, with the threshold
/// property as a builtin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PropertySpec {
    ThresholdProperty,
    ForbiddenFamily(Vec<PatternGraph>),
}

impl PropertySpec {
    pub fn forbidden_family(patterns: Vec<PatternGraph>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::BadSpec("forbidden family must be nonempty".into()));
        }
        if let Some(p) = patterns.iter().find(|p| p.k() < 2) {
            return Err(Error::BadSpec(format!(
                "forbidden patterns need k >= 2, got k = {}",
                p.k()
            )));
        }
        Ok(PropertySpec::ForbiddenFamily(patterns))
    }

    /// The forbidden patterns defining the property.
    pub fn patterns(&self) -> Vec<PatternGraph> {
        match self {
            PropertySpec::ThresholdProperty => threshold_family(),
            PropertySpec::ForbiddenFamily(f) => f.clone(),
        }
    }
}

/// Forbidden-family translation of the threshold property: three-vertex
/// patterns for the u2 = u3 case ((0,1) non-edge, (1,2) edge, (0,2) free)
/// plus the four-vertex completions ((0,1) non-edge, (2,3) edge, rest free).
pub fn threshold_family() -> Vec<PatternGraph> {
    let mut family = Vec::new();
    for free in 0..2u32 {
        // k=3 pair order: (0,1),(0,2),(1,2)
        let mask = (free << 1) | (1 << 2);
        family.push(PatternGraph::from_mask(3, mask).expect("valid 3-vertex pattern"));
    }
    for free in 0..16u32 {
        // k=4 pair order: (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
        let mask = (free << 1) | (1 << 5);
        family.push(PatternGraph::from_mask(4, mask).expect("valid 4-vertex pattern"));
    }
    family
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// Largest valid threshold (clique prefix length).
    Threshold(usize),
    /// Vertices u1 < u2 <= u3 < u4 with u1u2 a non-edge and u3u4 an edge.
    ViolatingTuple([usize; 4]),
    /// Induced copy of a forbidden pattern.
    ForbiddenCopy { pattern: usize, vertices: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub witness: Option<Witness>,
}

/// Longest prefix of the order that forms a clique.
fn clique_prefix(g: &OrderedGraph) -> usize {
    let mut p = 1;
    while p < g.n() && g.degree_below(p, p) == p as u64 {
        p += 1;
    }
    p
}

/// O(n^2) membership scan for the threshold property.
pub fn is_member_threshold(g: &OrderedGraph) -> MembershipVerdict {
    let n = g.n();
    let p = clique_prefix(g);
    // smallest valid threshold: every edge must start before it
    let mut s = 0usize;
    let mut max_edge: Option<(usize, usize)> = None;
    for u in 0..n {
        for v in (u + 1)..n {
            if g.has_edge(u, v) && u + 1 > s {
                s = u + 1;
                max_edge = Some((u, v));
            }
        }
    }
    if s <= p {
        return MembershipVerdict { member: true, witness: Some(Witness::Threshold(p)) };
    }
    // p < n here since s > p forces an edge beyond the clique prefix
    let u2 = p;
    let u1 = (0..u2).find(|&u| !g.has_edge(u, u2)).expect("prefix p+1 is not a clique");
    let (u3, u4) = max_edge.expect("s > 0 implies an edge");
    MembershipVerdict { member: false, witness: Some(Witness::ViolatingTuple([u1, u2, u3, u4])) }
}

/// Brute-force membership for a forbidden family: member iff no strictly
/// increasing vertex tuple induces a forbidden pattern.
pub fn is_member_forbidden(g: &OrderedGraph, spec: &PropertySpec) -> Result<MembershipVerdict> {
    let family = spec.patterns();
    let n = g.n();
    let work: f64 = family.iter().map(|f| (n as f64).powi(f.k() as i32)).sum();
    if work > FORBIDDEN_SEARCH_BUDGET {
        return Err(Error::GraphTooLarge(format!(
            "forbidden-family scan needs ~{work:.2e} assignments, budget {FORBIDDEN_SEARCH_BUDGET:.0e}"
        )));
    }

    fn search(g: &OrderedGraph, f: &PatternGraph, chosen: &mut Vec<usize>, start: usize) -> bool {
        let pos = chosen.len();
        if pos == f.k() {
            return true;
        }
        for v in start..g.n() {
            if g.n() - v < f.k() - pos {
                break;
            }
            let ok = chosen.iter().enumerate().all(|(i, &u)| g.has_edge(u, v) == f.has_edge(i, pos));
            if ok {
                chosen.push(v);
                if search(g, f, chosen, v + 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    for (idx, f) in family.iter().enumerate() {
        if f.k() > n {
            continue;
        }
        let mut chosen = Vec::with_capacity(f.k());
        if search(g, f, &mut chosen, 0) {
            return Ok(MembershipVerdict {
                member: false,
                witness: Some(Witness::ForbiddenCopy { pattern: idx, vertices: chosen }),
            });
        }
    }
    Ok(MembershipVerdict { member: true, witness: None })
}

/// Exact edit distance to the threshold property, normalized by C(n,2):
/// min over i of (non-edges among the first i) + (edges among the last n-i),
/// smallest minimizing i returned.
pub fn dist_threshold(g: &OrderedGraph) -> (f64, usize) {
    let n = g.n();
    assert!(n >= 2, "dist_threshold needs n >= 2");
    // edges_prefix[i]: edges among the first i vertices
    let mut edges_prefix = vec![0u64; n + 1];
    for i in 1..=n {
        edges_prefix[i] = edges_prefix[i - 1] + g.degree_below(i - 1, i - 1);
    }
    // edges_suffix[i]: edges among vertices i..n
    let mut edges_suffix = vec![0u64; n + 1];
    for i in (0..n).rev() {
        let out_right = g.degree_below(i, n) - g.degree_below(i, i + 1);
        edges_suffix[i] = edges_suffix[i + 1] + out_right;
    }
    let mut best_cost = u64::MAX;
    let mut best_i = 0usize;
    for i in 0..=n {
        let pairs = if i >= 2 { (i as u64) * (i as u64 - 1) / 2 } else { 0 };
        let cost = (pairs - edges_prefix[i]) + edges_suffix[i];
        if cost < best_cost {
            best_cost = cost;
            best_i = i;
        }
    }
    let binom = n as f64 * (n - 1) as f64 / 2.0;
    (best_cost as f64 / binom, best_i)
}

/// Extremal construction: with 1-indexed labels, u and v are connected iff
/// u + v >= n.
pub fn extremal_graph(n: usize) -> OrderedGraph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if (u + 1) + (v + 1) >= n {
                edges.push((u, v));
            }
        }
    }
    OrderedGraph::from_edges(n, &edges).expect("valid edges")
}

/// True iff every forbidden pattern with k <= k_max has density <= 1e-12 in W.
pub fn closure_density_check(w: &GridOrderon, spec: &PropertySpec, k_max: usize) -> Result<bool> {
    for f in spec.patterns() {
        if f.k() > k_max {
            continue;
        }
        if t_orderon(&f, w)?.value > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One-sided tester: membership check on the subgraph induced by a uniform
/// ordered k-subset (no repetition). Members are always accepted.
pub fn removal_tester(
    g: &OrderedGraph,
    spec: &PropertySpec,
    k: usize,
    seed: u64,
) -> Result<MembershipVerdict> {
    if k > g.n() {
        return Err(Error::BadSpec(format!("sample size {k} exceeds n = {}", g.n())));
    }
    let mut rng = SplitMix64::new(seed);
    let subset = rng.subset(g.n(), k);
    let sample = g.induced(&subset)?;
    match spec {
        PropertySpec::ThresholdProperty => Ok(is_member_threshold(&sample)),
        PropertySpec::ForbiddenFamily(_) => is_member_forbidden(&sample, spec),
    }
}

/// Graph parameters whose natural estimability is probed empirically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GraphParameter {
    EdgeDensity,
    PatternDensity(PatternGraph),
    ThresholdDistance,
}

impl GraphParameter {
    pub fn evaluate(&self, g: &OrderedGraph) -> Result<f64> {
        Ok(match self {
            GraphParameter::EdgeDensity => g.edge_density(),
            GraphParameter::PatternDensity(f) => crate::density::t_graph(f, g)?.value,
            GraphParameter::ThresholdDistance => dist_threshold(g).0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub k: usize,
    pub trials: u64,
    /// |f(G) - f(sample)| per trial, sorted ascending.
    pub deviations: Vec<f64>,
    /// (probability, deviation quantile) at fixed probes.
    pub quantiles: Vec<(f64, f64)>,
}

const QUANTILE_PROBES: [f64; 6] = [0.1, 0.25, 0.5, 0.75, 0.9, 0.95];

impl EstimationReport {
    pub fn quantile(&self, q: f64) -> f64 {
        let idx = ((self.deviations.len() as f64 * q).floor() as usize)
            .min(self.deviations.len() - 1);
        self.deviations[idx]
    }
}

/// Sample k-vertex induced subgraphs `trials` times and record the deviation
/// of the parameter from its full-graph value.
pub fn estimate_parameter(
    g: &OrderedGraph,
    param: &GraphParameter,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<EstimationReport> {
    if k > g.n() {
        return Err(Error::BadSpec(format!("sample size {k} exceeds n = {}", g.n())));
    }
    let full = param.evaluate(g)?;
    let mut deviations: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = SplitMix64::new(rng::derive(seed, i));
            let subset = rng.subset(g.n(), k);
            let sample = g.induced(&subset).expect("subset is valid");
            let value = param.evaluate(&sample).expect("parameter evaluates on samples");
            (full - value).abs()
        })
        .collect();
    deviations.sort_by(|a, b| a.partial_cmp(b).expect("finite deviations"));
    let report = EstimationReport { k, trials, deviations, quantiles: Vec::new() };
    let quantiles = QUANTILE_PROBES.iter().map(|&q| (q, report.quantile(q))).collect();
    Ok(EstimationReport { quantiles, ..report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::gnp;

    #[test]
    fn complete_and_empty_are_members() {
        let kn = OrderedGraph::complete(6).unwrap();
        let v = is_member_threshold(&kn);
        assert!(v.member);
        assert_eq!(v.witness, Some(Witness::Threshold(6)));

        let empty = OrderedGraph::empty(6).unwrap();
        let v = is_member_threshold(&empty);
        assert!(v.member);
        assert_eq!(v.witness, Some(Witness::Threshold(1)));
    }

    #[test]
    fn late_edge_violates() {
        // 1-indexed edge (3,4) on 4 vertices; witness tuple is (1,2,3,4)
        let g = OrderedGraph::from_edges(4, &[(2, 3)]).unwrap();
        let v = is_member_threshold(&g);
        assert!(!v.member);
        assert_eq!(v.witness, Some(Witness::ViolatingTuple([0, 1, 2, 3])));
    }

    #[test]
    fn forbidden_single_edge_family() {
        let spec = PropertySpec::forbidden_family(vec![PatternGraph::new(2, &[(0, 1)]).unwrap()])
            .unwrap();
        let empty = OrderedGraph::empty(5).unwrap();
        assert!(is_member_forbidden(&empty, &spec).unwrap().member);
        let g = OrderedGraph::from_edges(5, &[(1, 3)]).unwrap();
        let v = is_member_forbidden(&g, &spec).unwrap();
        assert!(!v.member);
        assert_eq!(
            v.witness,
            Some(Witness::ForbiddenCopy { pattern: 0, vertices: vec![1, 3] })
        );
    }

    #[test]
    fn family_needs_k_at_least_two() {
        let r = PropertySpec::forbidden_family(vec![PatternGraph::empty(1)]);
        assert!(matches!(r, Err(Error::BadSpec(_))));
        assert!(matches!(PropertySpec::forbidden_family(vec![]), Err(Error::BadSpec(_))));
    }

    #[test]
    fn threshold_equals_family_on_all_n5_graphs() {
        let spec = PropertySpec::ThresholdProperty;
        for mask in 0u64..1 << 10 {
            let mut edges = Vec::new();
            let mut bit = 0;
            for u in 0..5usize {
                for v in (u + 1)..5 {
                    if mask >> bit & 1 == 1 {
                        edges.push((u, v));
                    }
                    bit += 1;
                }
            }
            let g = OrderedGraph::from_edges(5, &edges).unwrap();
            let a = is_member_threshold(&g).member;
            let b = is_member_forbidden(&g, &spec).unwrap().member;
            assert_eq!(a, b, "mask={mask}");
        }
    }

    #[test]
    fn distance_examples() {
        let kn = OrderedGraph::complete(5).unwrap();
        // smallest minimizing threshold: the last vertex alone is already
        // an empty suffix
        assert_eq!(dist_threshold(&kn), (0.0, 4));

        let g = OrderedGraph::from_edges(4, &[(2, 3)]).unwrap();
        let (d, i) = dist_threshold(&g);
        assert!((d - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(i, 0);
    }

    #[test]
    fn distance_zero_iff_member() {
        for seed in 0..200u64 {
            let g = gnp(8, 0.4, seed);
            let member = is_member_threshold(&g).member;
            let (d, _) = dist_threshold(&g);
            assert_eq!(member, d == 0.0, "seed={seed}");
        }
    }

    #[test]
    fn extremal_structure() {
        let g = extremal_graph(2);
        assert_eq!(g.edges(), vec![(0, 1)]);
        let g = extremal_graph(4);
        // 1-indexed pairs with sum >= 4
        assert_eq!(g.edges(), vec![(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        // distance climbs toward 1/2
        let (d, _) = dist_threshold(&extremal_graph(200));
        assert!(d > 0.45, "d = {d}");
    }

    #[test]
    fn closure_checks() {
        let spec = PropertySpec::ThresholdProperty;
        let zeros = GridOrderon::constant(0.0).unwrap();
        let ones = GridOrderon::constant(1.0).unwrap();
        let half = GridOrderon::constant(0.5).unwrap();
        assert!(closure_density_check(&zeros, &spec, 4).unwrap());
        assert!(closure_density_check(&ones, &spec, 4).unwrap());
        assert!(!closure_density_check(&half, &spec, 4).unwrap());
    }

    #[test]
    fn tester_one_sided() {
        let spec = PropertySpec::ThresholdProperty;
        // members: clique prefix then empty suffix
        let mut edges = Vec::new();
        for u in 0..4usize {
            for v in (u + 1)..4 {
                edges.push((u, v));
            }
        }
        let member = OrderedGraph::from_edges(10, &edges).unwrap();
        for seed in 0..100u64 {
            assert!(removal_tester(&member, &spec, 5, seed).unwrap().member);
        }
        // k = n reduces to full membership
        let g = gnp(12, 0.5, 3);
        let full = is_member_threshold(&g).member;
        assert_eq!(removal_tester(&g, &spec, 12, 0).unwrap().member, full);
    }

    #[test]
    fn tester_rejects_far_graphs() {
        let spec = PropertySpec::ThresholdProperty;
        let g = gnp(400, 0.5, 11);
        let mut rejections = 0;
        for seed in 0..50u64 {
            if !removal_tester(&g, &spec, 20, seed).unwrap().member {
                rejections += 1;
            }
        }
        assert!(rejections >= 45, "only {rejections}/50 rejections");
    }

    #[test]
    fn estimation_on_complete_graph_is_exact() {
        let kn = OrderedGraph::complete(50).unwrap();
        let rep = estimate_parameter(&kn, &GraphParameter::EdgeDensity, 10, 100, 0).unwrap();
        assert!(rep.deviations.iter().all(|&d| d == 0.0));
        assert!(rep.quantiles.iter().all(|&(_, v)| v == 0.0));
    }

    #[test]
    fn estimation_quantiles_monotone_and_deterministic() {
        let g = gnp(300, 0.5, 5);
        let a = estimate_parameter(&g, &GraphParameter::EdgeDensity, 40, 200, 9).unwrap();
        let b = estimate_parameter(&g, &GraphParameter::EdgeDensity, 40, 200, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.quantiles.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(a.deviations.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn pattern_density_parameter() {
        let g = gnp(40, 0.5, 2);
        let f = PatternGraph::new(2, &[(0, 1)]).unwrap();
        let p = GraphParameter::PatternDensity(f);
        let rep = estimate_parameter(&g, &p, 20, 50, 1).unwrap();
        assert!(rep.quantile(0.5) < 0.2);
    }

    #[test]
    fn forbidden_budget_enforced() {
        let spec = PropertySpec::ThresholdProperty;
        let g = gnp(3000, 0.01, 0);
        assert!(matches!(is_member_forbidden(&g, &spec), Err(Error::GraphTooLarge(_))));
    }
}
