//! Monte Carlo harness: replicate sweeps over (n, k) grids, moment and
//! concentration estimators, transition curves, excess-tail estimation,
//! and spectral-gap surveys.
//!
//! Determinism contract: a sweep's output is a pure function of its
//! [`SweepConfig`]. Replicate `r` of cell `c` always draws from the
//! stream `(seed, c << 32 | r)`, work is scheduled with rayon but
//! collected into replicate order before any aggregation, and floats
//! are folded in that fixed order, so CSV and JSON bytes do not depend
//! on the worker count.
//!
//! Four counting methods can run per cell; each replicate either
//! produces a value or records an explicit skip (budget exceeded),
//! never a silent approximation:
//!
//! * `dfs`: exact simple-loop count;
//! * `exact-trace`: exact `n_tr` and `n_prim` via big-integer traces;
//! * `spectral`: floating `n_tr` plus per-graph gap statistics;
//! * `walk-sample`: unbiased estimate of `n_simp` from uniformly
//!   sampled rooted walks, `n d (d-1)^(k-1) hits / (walks k)`. This is
//!   the only `n_simp` route that scales to k in the hundreds, where
//!   simple loops are astronomically many but vanishingly rare among
//!   walks.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

use crate::census::{self, CensusError};
use crate::multigraph::Multigraph;
use crate::nbcore;
use crate::rng::RngStream;
use crate::sampler::{self, SamplerError};
use crate::spectra::{self, SpectraError};

#[derive(Debug, Error)]
pub enum ExperimentsError {
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("missing counts: {0}")]
    MissingCounts(String),
    #[error("invalid sweep config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Graph distribution to draw replicates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Configuration,
    UniformSimple,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Configuration => write!(f, "configuration"),
            Model::UniformSimple => write!(f, "uniform-simple"),
        }
    }
}

/// Which counting methods a sweep runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSet {
    pub dfs: bool,
    pub exact_trace: bool,
    pub spectral: bool,
    pub walk_sample: bool,
}

impl MethodSet {
    pub fn parse(spec: &str) -> Result<Self, ExperimentsError> {
        let mut set = MethodSet::default();
        for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "dfs" => set.dfs = true,
                "exact-trace" => set.exact_trace = true,
                "spectral" => set.spectral = true,
                "walk-sample" => set.walk_sample = true,
                other => {
                    return Err(ExperimentsError::InvalidConfig(format!(
                        "unknown method {other:?}"
                    )))
                }
            }
        }
        Ok(set)
    }
}

/// Resource limits; any replicate whose method exceeds its limit is
/// marked skipped for that method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepBudgets {
    pub dfs_nodes: u64,
    pub trace_products: u64,
    pub direct_diag: usize,
    pub rejection_attempts: u64,
    pub walks_per_replicate: u64,
}

impl Default for SweepBudgets {
    fn default() -> Self {
        Self {
            dfs_nodes: census::DEFAULT_DFS_NODE_BUDGET,
            trace_products: census::DEFAULT_TRACE_PRODUCT_BUDGET,
            direct_diag: spectra::DEFAULT_DIRECT_DIM,
            rejection_attempts: 100_000,
            walks_per_replicate: 100_000,
        }
    }
}

/// Full specification of a sweep; results are a pure function of this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub d: usize,
    pub n_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub model: Model,
    pub methods: MethodSet,
    pub budgets: SweepBudgets,
    /// Epsilon of the concentration fraction `|N k/(d-1)^k - 1| < eps`.
    pub concentration_epsilon: f64,
    /// Epsilon of the spectral-gap shares (lambda <= d - eps).
    pub gap_epsilon: f64,
}

impl SweepConfig {
    fn validate(&self) -> Result<(), ExperimentsError> {
        if self.replicates < 1 {
            return Err(ExperimentsError::InvalidConfig("replicates must be >= 1".into()));
        }
        if self.d < 2 {
            return Err(ExperimentsError::InvalidConfig("need d >= 2".into()));
        }
        if self.n_values.is_empty() || self.k_values.is_empty() {
            return Err(ExperimentsError::InvalidConfig("empty n or k grid".into()));
        }
        for &n in &self.n_values {
            if (n * self.d) % 2 != 0 {
                return Err(ExperimentsError::InvalidConfig(format!(
                    "n = {n} with d = {} leaves an odd number of half-edges",
                    self.d
                )));
            }
        }
        if self.k_values.iter().any(|&k| k < 1) {
            return Err(ExperimentsError::InvalidConfig("k values must be >= 1".into()));
        }
        Ok(())
    }
}

/// One replicate's measurements; `None` means the method did not run or
/// was skipped (see `skipped`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub stream_index: u64,
    /// Exact simple-loop count as a decimal string (`dfs`).
    pub nsimp_dfs: Option<String>,
    /// Exact trace as a decimal string (`exact-trace`).
    pub ntr_exact: Option<String>,
    /// Exact primitive count as a decimal string (`exact-trace`).
    pub nprim_exact: Option<String>,
    pub ntr_spectral: Option<f64>,
    pub spectral_rel_error: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub nsimp_walk: Option<f64>,
    pub walk_hits: Option<u64>,
    pub skipped: Vec<String>,
}

/// Aggregates for one (n, k) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub k: usize,
    pub records: Vec<ReplicateRecord>,
    pub mean_nsimp: Option<f64>,
    pub se_nsimp: Option<f64>,
    pub second_moment_nsimp: Option<f64>,
    pub conc_fraction: Option<f64>,
    pub mean_ntr: Option<f64>,
    pub se_ntr: Option<f64>,
    pub mean_nprim: Option<f64>,
    pub ratio_r: Option<f64>,
    pub ratio_ci_low: Option<f64>,
    pub ratio_ci_high: Option<f64>,
    pub share_lambda: Option<f64>,
    pub share_mu: Option<f64>,
    /// Replicates skipped per method name.
    pub skipped: BTreeMap<String, usize>,
}

/// Result of a whole sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub cells: Vec<CellResult>,
}

/// Mean, raw second moment, and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub second_moment: f64,
    pub standard_error: f64,
}

/// Sample moments; needs at least two samples for the standard error.
pub fn estimate_moments(samples: &[f64]) -> Result<Moments, ExperimentsError> {
    if samples.len() < 2 {
        return Err(ExperimentsError::TooFewSamples { need: 2, got: samples.len() });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let second_moment = samples.iter().map(|x| x * x).sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Moments { mean, second_moment, standard_error: (var / n).sqrt() })
}

/// Share of samples within relative distance `epsilon` of `center`.
pub fn concentration_check(samples: &[f64], center: f64, epsilon: f64) -> f64 {
    assert!(center > 0.0 && !samples.is_empty());
    let hits = samples.iter().filter(|&&s| (s / center - 1.0).abs() < epsilon).count();
    hits as f64 / samples.len() as f64
}

/// Unbiased walk-sampling estimate of the simple-loop count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkEstimate {
    pub nsimp: f64,
    pub hits: u64,
    pub walks: u64,
}

/// Estimate `N_simp(g, k)` by sampling `walks` uniform rooted
/// non-backtracking walks and counting those that close into a simple
/// loop: each simple loop owns exactly `k` of the `n d (d-1)^(k-1)`
/// rooted walks, so `hits/walks` rescales to an unbiased count.
pub fn estimate_nsimp_by_walks(
    g: &Multigraph,
    k: usize,
    walks: u64,
    stream: RngStream,
) -> WalkEstimate {
    assert!(k >= 1 && g.degree() >= 2 && walks >= 1);
    let d = g.degree();
    let n = g.vertices();
    let mut stamp = vec![u64::MAX; n];
    let mut hits = 0u64;
    for w in 0..walks {
        let mut rng = stream.child(w).rng();
        let start = rng.random_range(0..n);
        let first = start * d + rng.random_range(0..d);
        stamp[start] = w; // start is the final head; any earlier visit collides
        let mut e = first;
        let mut ok = true;
        for step in 1..=k {
            let head = g.vertex_of(g.mate(e));
            if step == k {
                // Simple closed loop: return to start without the wrap
                // backtrack. Earlier heads were all fresh.
                ok = head == start && g.mate(e) != first;
                break;
            }
            if stamp[head] == w {
                ok = false;
                break;
            }
            stamp[head] = w;
            let choice = rng.random_range(0..d - 1);
            let banned = g.mate(e);
            let mut next = head * d + choice;
            if next >= banned {
                next += 1;
            }
            e = next;
        }
        if ok {
            hits += 1;
        }
    }
    let rooted = n as f64 * d as f64 * ((d - 1) as f64).powi(k as i32 - 1);
    let nsimp = rooted * hits as f64 / walks as f64 / k as f64;
    WalkEstimate { nsimp, hits, walks }
}

fn sample_graph(
    model: Model,
    d: usize,
    n: usize,
    stream: RngStream,
    budgets: &SweepBudgets,
) -> Result<Multigraph, SamplerError> {
    match model {
        Model::Configuration => sampler::sample_configuration(d, n, stream),
        Model::UniformSimple => {
            sampler::sample_uniform_simple(d, n, stream, budgets.rejection_attempts)
        }
    }
}

fn run_replicate(
    config: &SweepConfig,
    n: usize,
    k: usize,
    stream: RngStream,
) -> Result<ReplicateRecord, ExperimentsError> {
    let mut rec = ReplicateRecord {
        stream_index: stream.stream_index,
        nsimp_dfs: None,
        ntr_exact: None,
        nprim_exact: None,
        ntr_spectral: None,
        spectral_rel_error: None,
        lambda: None,
        mu: None,
        nsimp_walk: None,
        walk_hits: None,
        skipped: Vec::new(),
    };
    let g = sample_graph(config.model, config.d, n, stream.child(0), &config.budgets)?;
    if config.methods.dfs {
        if k > n {
            // No simple loop can be longer than the vertex count.
            rec.nsimp_dfs = Some("0".to_string());
        } else {
            match census::count_simple_loops_upto(&g, k, config.budgets.dfs_nodes) {
                Ok(counts) => rec.nsimp_dfs = Some(counts[k].to_string()),
                Err(CensusError::ResourceBudgetExceeded { .. }) => {
                    rec.skipped.push("dfs".to_string())
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    if config.methods.exact_trace {
        match census::nb_traces_upto(&g, k, config.budgets.trace_products) {
            Ok(traces) => {
                rec.ntr_exact = Some(traces[k].to_string());
                let nprim = census::count_primitive_loops_from_traces(&traces, k)?;
                rec.nprim_exact = Some(nprim.to_string());
            }
            Err(CensusError::ResourceBudgetExceeded { .. }) => {
                rec.skipped.push("exact-trace".to_string())
            }
            Err(e) => return Err(e.into()),
        }
    }
    if config.methods.spectral {
        match spectra::spectral_report(&g, config.budgets.direct_diag) {
            Ok(report) => {
                let trace = census::spectral_trace_from_report(&report, config.d, k);
                rec.ntr_spectral = Some(trace.value);
                rec.spectral_rel_error = Some(trace.rel_error);
                rec.lambda = report.lambda_gap;
                rec.mu = report.mu_second;
            }
            Err(SpectraError::BudgetExceeded { .. }) => {
                rec.skipped.push("spectral".to_string())
            }
            Err(e) => return Err(e.into()),
        }
    }
    if config.methods.walk_sample {
        let est = estimate_nsimp_by_walks(&g, k, config.budgets.walks_per_replicate, stream.child(1));
        rec.nsimp_walk = Some(est.nsimp);
        rec.walk_hits = Some(est.hits);
    }
    Ok(rec)
}

/// Paired delta-method CI for `R = k x_bar / y_bar` at 95%.
fn ratio_ci(k: usize, xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    if ym == 0.0 {
        return None;
    }
    let r = k as f64 * xm / ym;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    let mut cov = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        var_x += (x - xm).powi(2);
        var_y += (y - ym).powi(2);
        cov += (x - xm) * (y - ym);
    }
    var_x /= n - 1.0;
    var_y /= n - 1.0;
    cov /= n - 1.0;
    let rel_var = if xm != 0.0 {
        var_x / (xm * xm) + var_y / (ym * ym) - 2.0 * cov / (xm * ym)
    } else {
        var_y / (ym * ym)
    };
    let se = r.abs() * (rel_var.max(0.0) / n).sqrt();
    Some((r, r - 1.96 * se, r + 1.96 * se))
}

/// Per-method n_simp samples of a cell, in replicate order.
fn nsimp_samples(records: &[ReplicateRecord], method: &str) -> Vec<f64> {
    match method {
        "dfs" => records
            .iter()
            .filter_map(|r| r.nsimp_dfs.as_ref().and_then(|s| s.parse().ok()))
            .collect(),
        "walk-sample" => records.iter().filter_map(|r| r.nsimp_walk).collect(),
        _ => Vec::new(),
    }
}

/// Per-method n_tr samples of a cell, in replicate order.
fn ntr_samples(records: &[ReplicateRecord], method: &str) -> Vec<f64> {
    match method {
        "exact-trace" => records
            .iter()
            .filter_map(|r| r.ntr_exact.as_ref().and_then(|s| s.parse().ok()))
            .collect(),
        "spectral" => records.iter().filter_map(|r| r.ntr_spectral).collect(),
        _ => Vec::new(),
    }
}

fn aggregate_cell(config: &SweepConfig, n: usize, k: usize, records: Vec<ReplicateRecord>) -> CellResult {
    let mut cell = CellResult {
        n,
        k,
        mean_nsimp: None,
        se_nsimp: None,
        second_moment_nsimp: None,
        conc_fraction: None,
        mean_ntr: None,
        se_ntr: None,
        mean_nprim: None,
        ratio_r: None,
        ratio_ci_low: None,
        ratio_ci_high: None,
        share_lambda: None,
        share_mu: None,
        skipped: BTreeMap::new(),
        records,
    };
    for rec in &cell.records {
        for s in &rec.skipped {
            *cell.skipped.entry(s.clone()).or_insert(0) += 1;
        }
    }
    // Exact DFS counts are preferred for n_simp, walk estimates are the
    // fallback; likewise exact traces over spectral ones for n_tr.
    let dfs_samples = nsimp_samples(&cell.records, "dfs");
    let walk_samples = nsimp_samples(&cell.records, "walk-sample");
    let nsimp: &[f64] = if dfs_samples.is_empty() { &walk_samples } else { &dfs_samples };
    if let Ok(m) = estimate_moments(nsimp) {
        cell.mean_nsimp = Some(m.mean);
        cell.se_nsimp = Some(m.standard_error);
        cell.second_moment_nsimp = Some(m.second_moment);
    }
    if !nsimp.is_empty() {
        let center = ((config.d - 1) as f64).powi(k as i32) / k as f64;
        cell.conc_fraction = Some(concentration_check(nsimp, center, config.concentration_epsilon));
    }
    let ntr_exact = ntr_samples(&cell.records, "exact-trace");
    let ntr_spectral = ntr_samples(&cell.records, "spectral");
    let ntr: &[f64] = if ntr_exact.is_empty() { &ntr_spectral } else { &ntr_exact };
    if let Ok(m) = estimate_moments(ntr) {
        cell.mean_ntr = Some(m.mean);
        cell.se_ntr = Some(m.standard_error);
    }
    let parse = |s: &String| s.parse::<f64>().unwrap_or(f64::INFINITY);
    let nprim: Vec<f64> =
        cell.records.iter().filter_map(|r| r.nprim_exact.as_ref().map(parse)).collect();
    if !nprim.is_empty() {
        cell.mean_nprim = Some(nprim.iter().sum::<f64>() / nprim.len() as f64);
    }
    // Ratio over replicates where both preferred sides ran.
    let use_dfs = !dfs_samples.is_empty();
    let use_exact = !ntr_exact.is_empty();
    let pairs: Vec<(f64, f64)> = cell
        .records
        .iter()
        .filter_map(|r| {
            let x = if use_dfs { r.nsimp_dfs.as_ref().map(parse) } else { r.nsimp_walk };
            let y = if use_exact { r.ntr_exact.as_ref().map(parse) } else { r.ntr_spectral };
            x.zip(y)
        })
        .collect();
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    if let Some((r, lo, hi)) = ratio_ci(k, &xs, &ys) {
        cell.ratio_r = Some(r);
        cell.ratio_ci_low = Some(lo);
        cell.ratio_ci_high = Some(hi);
    }
    let lambdas: Vec<f64> = cell.records.iter().filter_map(|r| r.lambda).collect();
    if !lambdas.is_empty() {
        let thr = config.d as f64 - config.gap_epsilon;
        cell.share_lambda =
            Some(lambdas.iter().filter(|&&l| l <= thr).count() as f64 / lambdas.len() as f64);
    }
    let mus: Vec<f64> = cell.records.iter().filter_map(|r| r.mu).collect();
    if !mus.is_empty() {
        if let Ok(bound) = spectra::gap_bound(config.gap_epsilon, config.d) {
            cell.share_mu = Some(
                mus.iter().filter(|&&m| m <= bound.bound + 1e-9).count() as f64 / mus.len() as f64,
            );
        }
    }
    cell
}

/// Run a sweep. Cells iterate row-major over `n_values x k_values`;
/// replicate `r` of cell `c` uses stream index `c << 32 | r`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult, ExperimentsError> {
    config.validate()?;
    let mut cells = Vec::new();
    let mut cell_idx = 0u64;
    for &n in &config.n_values {
        for &k in &config.k_values {
            let records: Vec<Result<ReplicateRecord, ExperimentsError>> = (0..config.replicates)
                .into_par_iter()
                .map(|r| {
                    let stream = RngStream::new(config.seed, (cell_idx << 32) | r as u64);
                    run_replicate(config, n, k, stream)
                })
                .collect();
            let records: Vec<ReplicateRecord> =
                records.into_iter().collect::<Result<_, _>>()?;
            cells.push(aggregate_cell(config, n, k, records));
            cell_idx += 1;
        }
    }
    Ok(SweepResult { config: config.clone(), cells })
}

/// One row of the transition table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionRow {
    pub k: usize,
    /// `R(k) = k mean(N_simp) / mean(N_tr)`; `None` marks an undefined
    /// cell (zero denominator, e.g. odd k on a bipartite graph).
    pub ratio: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

/// Extract `R(k)` per k from a single-n sweep.
pub fn transition_curve(sweep: &SweepResult) -> Result<Vec<TransitionRow>, ExperimentsError> {
    if sweep.config.n_values.len() != 1 {
        return Err(ExperimentsError::InvalidConfig(
            "transition curve needs a single-n sweep".into(),
        ));
    }
    let mut rows = Vec::new();
    for cell in &sweep.cells {
        if cell.mean_ntr.is_none() {
            return Err(ExperimentsError::MissingCounts(format!(
                "cell (n = {}, k = {}) has no N_tr",
                cell.n, cell.k
            )));
        }
        rows.push(TransitionRow {
            k: cell.k,
            ratio: cell.ratio_r,
            ci_low: cell.ratio_ci_low,
            ci_high: cell.ratio_ci_high,
        });
    }
    Ok(rows)
}

/// Excess-tail estimate with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExcessTail {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub events: u64,
    pub walks: u64,
}

/// Probability that a random non-backtracking walk of length `k` on a
/// fresh configuration-model graph traces at least two independent
/// cycles. Each walk draws its own graph, so the samples are i.i.d.
/// over the joint (graph, walk) distribution.
pub fn excess_tail_probability(
    d: usize,
    n: usize,
    k: usize,
    walks: u64,
    stream: RngStream,
) -> Result<ExcessTail, ExperimentsError> {
    assert!(walks >= 1);
    let events: u64 = (0..walks)
        .into_par_iter()
        .map(|w| {
            let s = stream.child(w);
            let g = sample_configuration_unwrap(d, n, s.child(0));
            let walk = nbcore::sample_nb_walk(&g, k, s.child(1));
            let excess = nbcore::walk_excess(&g, &walk.edges).expect("sampled walk is chained");
            u64::from(excess >= 2)
        })
        .sum();
    let p = events as f64 / walks as f64;
    // Wilson interval.
    let z = 1.96f64;
    let nn = walks as f64;
    let denom = 1.0 + z * z / nn;
    let center = (p + z * z / (2.0 * nn)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)).sqrt();
    Ok(ExcessTail {
        estimate: p,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
        events,
        walks,
    })
}

fn sample_configuration_unwrap(d: usize, n: usize, stream: RngStream) -> Multigraph {
    sampler::sample_configuration(d, n, stream).expect("n*d is even")
}

/// Fractions of sampled uniform-simple graphs with (a) adjacency gap
/// `lambda <= d - epsilon` and (b) non-backtracking gap `mu` within the
/// transfer bound for that epsilon.
pub fn spectral_gap_survey(
    d: usize,
    n: usize,
    replicates: usize,
    epsilon: f64,
    stream: RngStream,
) -> Result<(f64, f64), ExperimentsError> {
    assert!(replicates >= 1);
    // For epsilon past d - 2 sqrt(d-1) every mapped eigenvalue below
    // the lambda threshold is already on the sqrt(d-1) circle, so the
    // transfer bound degrades to sqrt(d-1) itself.
    let bound = match spectra::gap_bound(epsilon, d) {
        Ok(b) => b.bound,
        Err(SpectraError::DomainError { .. }) => ((d - 1) as f64).sqrt(),
        Err(e) => return Err(e.into()),
    };
    let stats: Vec<Result<(bool, bool), ExperimentsError>> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let g = sampler::sample_uniform_simple(d, n, stream.child(i), 100_000)?;
            let report = spectra::spectral_report(&g, 0)?; // simple: no direct fallback needed
            let lambda = report.lambda_gap.ok_or_else(|| {
                ExperimentsError::MissingCounts("survey needs n >= 2".into())
            })?;
            let mu = report.mu_second.ok_or_else(|| {
                ExperimentsError::MissingCounts("missing Perron eigenvalue".into())
            })?;
            Ok((lambda <= d as f64 - epsilon, mu <= bound + 1e-9))
        })
        .collect();
    let mut lam_hits = 0usize;
    let mut mu_hits = 0usize;
    for s in stats {
        let (l, m) = s?;
        lam_hits += usize::from(l);
        mu_hits += usize::from(m);
    }
    Ok((lam_hits as f64 / replicates as f64, mu_hits as f64 / replicates as f64))
}

const CSV_HEADER: &str = "d,n,k,model,method,replicates,mean_nsimp,se_nsimp,mean_ntr,se_ntr,\
mean_nprim,second_moment_nsimp,ratio_R,ratio_CI_low,ratio_CI_high,conc_fraction,share_lambda,\
share_mu,skipped";

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl SweepResult {
    /// CSV with one row per (d, n, k, method); shortest-round-trip float
    /// formatting keeps bytes deterministic.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        let methods: Vec<&str> = [
            ("dfs", self.config.methods.dfs),
            ("exact-trace", self.config.methods.exact_trace),
            ("spectral", self.config.methods.spectral),
            ("walk-sample", self.config.methods.walk_sample),
        ]
        .iter()
        .filter(|(_, on)| *on)
        .map(|(name, _)| *name)
        .collect();
        for cell in &self.cells {
            for method in &methods {
                // Each row carries its own method's samples; the ratio
                // columns are cell-level (they pair the preferred
                // n_simp and n_tr routes) and ride on the n_tr rows.
                let nsimp = nsimp_samples(&cell.records, method);
                let ntr = ntr_samples(&cell.records, method);
                let nsimp_m = estimate_moments(&nsimp).ok();
                let ntr_m = estimate_moments(&ntr).ok();
                let conc = (!nsimp.is_empty()).then(|| {
                    let center =
                        ((self.config.d - 1) as f64).powi(cell.k as i32) / cell.k as f64;
                    concentration_check(&nsimp, center, self.config.concentration_epsilon)
                });
                let ntr_row = matches!(*method, "exact-trace" | "spectral");
                let skipped = cell.skipped.get(*method).copied().unwrap_or(0);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    self.config.d,
                    cell.n,
                    cell.k,
                    self.config.model,
                    method,
                    self.config.replicates,
                    fmt_opt(nsimp_m.map(|m| m.mean)),
                    fmt_opt(nsimp_m.map(|m| m.standard_error)),
                    fmt_opt(ntr_m.map(|m| m.mean)),
                    fmt_opt(ntr_m.map(|m| m.standard_error)),
                    if *method == "exact-trace" { fmt_opt(cell.mean_nprim) } else { String::new() },
                    fmt_opt(nsimp_m.map(|m| m.second_moment)),
                    if ntr_row { fmt_opt(cell.ratio_r) } else { String::new() },
                    if ntr_row { fmt_opt(cell.ratio_ci_low) } else { String::new() },
                    if ntr_row { fmt_opt(cell.ratio_ci_high) } else { String::new() },
                    fmt_opt(conc),
                    if *method == "spectral" { fmt_opt(cell.share_lambda) } else { String::new() },
                    if *method == "spectral" { fmt_opt(cell.share_mu) } else { String::new() },
                    skipped,
                );
            }
        }
        out
    }

    /// JSON mirror with exact integers as decimal strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep result serializes")
    }
}
