//! Desk-scale experiments with machine-readable reports.
//!
//! Each runner builds one or more tables, re-checks its headline claims, and
//! returns them with the exact config used. `write_output` emits one CSV per
//! table plus a JSON manifest embedding the config and library version, so a
//! run is reproducible bit-for-bit from (config, seed).

use crate::csdist::cs_upper;
use crate::density::{t_graph, t_orderon};
use crate::error::Result;
use crate::graph::{odd_clique, PatternGraph};
use crate::hereditary::{
    dist_threshold, estimate_parameter, extremal_graph, is_member_threshold, removal_tester,
    GraphParameter, PropertySpec,
};
use crate::orderon::{embed, GridOrderon};
use crate::random::{gnp, sample_graph, sbm_consecutive, SbmSpec};
use crate::rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutput {
    pub name: String,
    pub version: String,
    pub config: serde_json::Value,
    pub tables: Vec<Table>,
    /// Failed headline checks; empty means all checks passed.
    pub failures: Vec<String>,
}

impl ExperimentOutput {
    fn new(name: &str, config: serde_json::Value) -> Self {
        ExperimentOutput {
            name: name.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            tables: Vec::new(),
            failures: Vec::new(),
        }
    }
}

/// Write one CSV per table plus manifest.json; returns the written paths.
pub fn write_output(out_dir: impl AsRef<Path>, output: &ExperimentOutput) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut table_files = Vec::new();
    for table in &output.tables {
        let path = dir.join(format!("{}.csv", table.name));
        let mut wtr = csv::Writer::from_path(&path).map_err(csv_err)?;
        wtr.write_record(&table.header).map_err(csv_err)?;
        for row in &table.rows {
            wtr.write_record(row).map_err(csv_err)?;
        }
        wtr.flush()?;
        table_files.push(json!({"table": table.name, "file": format!("{}.csv", table.name)}));
        written.push(path);
    }
    let manifest = json!({
        "experiment": output.name,
        "version": output.version,
        "config": output.config,
        "tables": table_files,
        "failures": output.failures,
    });
    let path = dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    written.push(path);
    Ok(written)
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Parse(format!("csv: {e}"))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

// ---------------------------------------------------------------------------
// odd-clique frequencies

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OddCliqueConfig {
    pub sizes: Vec<usize>,
    pub ks: Vec<usize>,
    pub tolerance: f64,
}

impl Default for OddCliqueConfig {
    fn default() -> Self {
        OddCliqueConfig { sizes: vec![4, 16, 64], ks: vec![2, 3, 4], tolerance: 0.05 }
    }
}

/// Patterns tracked per k: the empty graph, every clique-plus-isolated
/// pattern, and one pattern outside that class (limit 0) when k >= 3.
pub fn odd_clique_patterns(k: usize) -> Vec<(String, PatternGraph, Option<f64>)> {
    let mut out = Vec::new();
    let limit_empty = (k + 1) as f64 / (1u64 << k) as f64;
    out.push(("empty".to_string(), PatternGraph::empty(k), Some(limit_empty)));
    let limit_clique = 1.0 / (1u64 << k) as f64;
    for subset in 0u32..1 << k {
        if subset.count_ones() >= 2 {
            let f = PatternGraph::clique_plus_isolated(k, subset).expect("subset pattern");
            out.push((format!("clique_subset_{subset:#b}"), f, Some(limit_clique)));
        }
    }
    if k >= 3 {
        let path = PatternGraph::new(k, &[(0, 1), (1, 2)]).expect("path pattern");
        out.push(("path_012".to_string(), path, Some(0.0)));
    }
    out
}

pub fn run_odd_clique(config: &OddCliqueConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::new("odd-clique", serde_json::to_value(config)?);
    if config.ks.iter().any(|&k| k > 4) {
        return Err(crate::error::Error::BadConfig("odd-clique needs k <= 4".into()));
    }
    let wstar = GridOrderon::odd_clique_limit();
    let mut rows = Vec::new();
    for &k in &config.ks {
        for (label, f, stated_limit) in odd_clique_patterns(k) {
            let limit = t_orderon(&f, &wstar)?.value;
            if let Some(expect) = stated_limit {
                if (limit - expect).abs() > 1e-10 {
                    out.failures.push(format!(
                        "limit frequency of {label} (k={k}) is {limit}, expected {expect}"
                    ));
                }
            }
            let mut last: Option<f64> = None;
            for &n in &config.sizes {
                let value = t_graph(&f, &odd_clique(n))?.value;
                rows.push(vec![
                    k.to_string(),
                    label.clone(),
                    n.to_string(),
                    fmt(value),
                    fmt(limit),
                ]);
                last = Some(value);
            }
            if let (Some(value), Some(&n)) = (last, config.sizes.last()) {
                if (value - limit).abs() > config.tolerance {
                    out.failures.push(format!(
                        "t({label}, H_{n}) = {value} is {} from its limit {limit}",
                        (value - limit).abs()
                    ));
                }
            }
        }
    }
    out.tables.push(Table {
        name: "odd_clique_frequencies".to_string(),
        header: ["k", "pattern", "n", "t_graph", "limit"].map(String::from).to_vec(),
        rows,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// furthest graph from the threshold property

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FurthestConfig {
    pub n: usize,
    pub p_values: Vec<f64>,
    pub seeds: u64,
    pub sbm_blocks: usize,
    pub base_seed: u64,
}

impl Default for FurthestConfig {
    fn default() -> Self {
        FurthestConfig {
            n: 2000,
            p_values: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            seeds: 5,
            sbm_blocks: 16,
            base_seed: 1,
        }
    }
}

pub fn run_furthest(config: &FurthestConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::new("furthest", serde_json::to_value(config)?);
    let n = config.n;
    let mut rows = Vec::new();

    let mut gnp_peak: f64 = 0.0;
    for &p in &config.p_values {
        for s in 0..config.seeds {
            let seed = rng::derive(config.base_seed, (p * 1000.0) as u64 + s);
            let (d, i) = dist_threshold(&gnp(n, p, seed));
            gnp_peak = gnp_peak.max(d);
            rows.push(vec![
                "gnp".to_string(),
                n.to_string(),
                fmt(p),
                seed.to_string(),
                fmt(d),
                i.to_string(),
            ]);
            if (d - p * (1.0 - p)).abs() > 0.02 {
                out.failures.push(format!(
                    "gnp(n={n}, p={p}) distance {d} is off p(1-p) = {}",
                    p * (1.0 - p)
                ));
            }
        }
    }

    let (d_ext, i_ext) = dist_threshold(&extremal_graph(n));
    rows.push(vec![
        "extremal".to_string(),
        n.to_string(),
        String::new(),
        String::new(),
        fmt(d_ext),
        i_ext.to_string(),
    ]);
    if n >= 2000 && d_ext < 0.48 {
        out.failures.push(format!("extremal distance {d_ext} below 0.48"));
    }

    let spec = SbmSpec::staircase(config.sbm_blocks)?;
    let mut sbm_good = 0;
    for s in 0..config.seeds {
        let seed = rng::derive(config.base_seed, 10_000 + s);
        let (d, i) = dist_threshold(&sbm_consecutive(n, &spec, seed)?);
        if d >= 0.45 {
            sbm_good += 1;
        }
        rows.push(vec![
            "sbm-staircase".to_string(),
            n.to_string(),
            config.sbm_blocks.to_string(),
            seed.to_string(),
            fmt(d),
            i.to_string(),
        ]);
    }
    if n >= 2000 && config.seeds >= 5 && sbm_good + 1 < config.seeds {
        out.failures.push(format!(
            "staircase SBM reached distance 0.45 on only {sbm_good}/{} seeds",
            config.seeds
        ));
    }
    if gnp_peak > 0.27 {
        out.failures.push(format!("gnp distances peak at {gnp_peak}, above 1/4 + slack"));
    }

    out.tables.push(Table {
        name: "furthest_distances".to_string(),
        header: ["kind", "n", "param", "seed", "distance", "threshold"].map(String::from).to_vec(),
        rows,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// sampling decay

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingDecayConfig {
    pub ks: Vec<usize>,
    pub trials: u64,
    pub resolution: usize,
    pub budget: f64,
    pub base_seed: u64,
}

impl Default for SamplingDecayConfig {
    fn default() -> Self {
        SamplingDecayConfig { ks: vec![16, 64, 256], trials: 30, resolution: 2, budget: 0.5, base_seed: 1 }
    }
}

pub fn run_sampling_decay(config: &SamplingDecayConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::new("sampling-decay", serde_json::to_value(config)?);
    let wstar = GridOrderon::odd_clique_limit();
    let mut per_seed_rows = Vec::new();
    let mut medians = Vec::new();
    for &k in &config.ks {
        let values: Vec<f64> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let seed = rng::derive(config.base_seed, (k as u64) << 20 | t);
                let g = sample_graph(k, &wstar, seed);
                let (v, _) = cs_upper(&wstar, &embed(&g), config.resolution, config.budget, seed);
                v
            })
            .collect();
        for (t, v) in values.iter().enumerate() {
            per_seed_rows.push(vec![k.to_string(), t.to_string(), fmt(*v)]);
        }
        let mut vals = values.clone();
        medians.push((k, median(&mut vals)));
    }
    for pair in medians.windows(2) {
        let ((k0, m0), (k1, m1)) = (pair[0], pair[1]);
        if m1 >= m0 {
            out.failures.push(format!(
                "median distance did not decrease: k={k0} gives {m0}, k={k1} gives {m1}"
            ));
        }
    }
    out.tables.push(Table {
        name: "sampling_decay_per_seed".to_string(),
        header: ["k", "trial", "cs_upper"].map(String::from).to_vec(),
        rows: per_seed_rows,
    });
    out.tables.push(Table {
        name: "sampling_decay_medians".to_string(),
        header: ["k", "median_cs_upper"].map(String::from).to_vec(),
        rows: medians.iter().map(|(k, m)| vec![k.to_string(), fmt(*m)]).collect(),
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// estimability

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimabilityConfig {
    pub n: usize,
    pub p: f64,
    pub ks: Vec<usize>,
    pub trials: u64,
    pub base_seed: u64,
}

impl Default for EstimabilityConfig {
    fn default() -> Self {
        EstimabilityConfig { n: 2000, p: 0.5, ks: vec![50, 100, 200], trials: 200, base_seed: 1 }
    }
}

pub fn run_estimability(config: &EstimabilityConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::new("estimability", serde_json::to_value(config)?);
    let g = gnp(config.n, config.p, config.base_seed);
    let params =
        [("edge-density", GraphParameter::EdgeDensity), ("threshold-distance", GraphParameter::ThresholdDistance)];
    let mut rows = Vec::new();
    for (label, param) in &params {
        let mut q90s = Vec::new();
        for &k in &config.ks {
            let rep = estimate_parameter(&g, param, k, config.trials, rng::derive(config.base_seed, k as u64))?;
            rows.push(vec![
                label.to_string(),
                k.to_string(),
                config.trials.to_string(),
                fmt(rep.quantile(0.5)),
                fmt(rep.quantile(0.9)),
                fmt(rep.quantile(0.95)),
            ]);
            q90s.push(rep.quantile(0.9));
        }
        if q90s.len() >= 2 && *q90s.last().unwrap() > q90s.first().unwrap() + 1e-12 {
            out.failures.push(format!(
                "{label}: 90th percentile deviation grew from {} to {} as k increased",
                q90s.first().unwrap(),
                q90s.last().unwrap()
            ));
        }
    }
    out.tables.push(Table {
        name: "estimability_quantiles".to_string(),
        header: ["parameter", "k", "trials", "q50", "q90", "q95"].map(String::from).to_vec(),
        rows,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// tester

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct TesterConfig {
    pub n: usize,
    pub p: f64,
    pub ks: Vec<usize>,
    pub trials: u64,
    pub base_seed: u64,
}

impl Default for TesterConfig {
    fn default() -> Self {
        TesterConfig { n: 2000, p: 0.5, ks: vec![10, 30], trials: 200, base_seed: 1 }
    }
}

/// A member of the threshold property: clique prefix, empty suffix.
fn member_graph(n: usize) -> crate::graph::OrderedGraph {
    let mut edges = Vec::new();
    for u in 0..n / 2 {
        for v in (u + 1)..n / 2 {
            edges.push((u, v));
        }
    }
    crate::graph::OrderedGraph::from_edges(n, &edges).expect("valid member graph")
}

pub fn run_tester(config: &TesterConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::new("tester", serde_json::to_value(config)?);
    let spec = PropertySpec::ThresholdProperty;
    let far = gnp(config.n, config.p, config.base_seed);
    let member = member_graph(config.n);
    debug_assert!(is_member_threshold(&member).member);
    let mut rows = Vec::new();
    for &k in &config.ks {
        for (label, graph) in [("member", &member), ("gnp", &far)] {
            let rejections: u64 = (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = rng::derive(config.base_seed, (k as u64) << 24 | t);
                    let verdict = removal_tester(graph, &spec, k, seed).expect("k <= n");
                    u64::from(!verdict.member)
                })
                .sum();
            let freq = rejections as f64 / config.trials as f64;
            rows.push(vec![label.to_string(), k.to_string(), config.trials.to_string(), fmt(freq)]);
            if label == "member" && rejections > 0 {
                out.failures.push(format!("member graph rejected {rejections} times at k={k}"));
            }
            if label == "gnp" && k >= 30 && config.n >= 500 && freq < 0.9 {
                out.failures.push(format!("far graph rejected at rate {freq} < 0.9 at k={k}"));
            }
        }
    }
    out.tables.push(Table {
        name: "tester_rejections".to_string(),
        header: ["graph", "k", "trials", "rejection_rate"].map(String::from).to_vec(),
        rows,
    });
    Ok(out)
}
