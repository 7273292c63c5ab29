//! Exact loop counting.
//!
//! Four quantities are tracked for a graph at one length `k`, all as
//! exact integers:
//!
//! * `n_simp`: simple cyclically non-backtracking loops, counted by a
//!   pruned DFS rooted at each loop's minimum vertex;
//! * `n_tr`: closed non-backtracking walks rooted at a directed
//!   edge, i.e. the trace of the k-th power of the non-backtracking
//!   operator, computed by repeated sparse application in big-integer
//!   arithmetic (a dense matrix-power witness is kept for tiny graphs);
//! * `n_prim`: primitive loops, recovered from the traces by Moebius
//!   inversion of `n_tr(k) = sum over r|k of r * n_prim(r)`;
//! * `n_all`: all loops, the plain divisor sum of `n_prim`.
//!
//! `n_tr` is defined here as the trace (walks rooted at a directed
//! edge, wrap condition included); a vertex-rooted reading of "starts
//! and ends at the same vertex" would drop the wrap condition and break
//! the divisor identity, so it is deliberately not implemented.
//!
//! The brute-force [`enumerate_loops_oracle`] recomputes everything by
//! exhaustive walk enumeration and is the ground truth the fast paths
//! are tested against.

use num::bigint::{BigInt, BigUint};
use num::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::multigraph::{DirectedEdge, Multigraph};
use crate::nbcore::{self, NbLoop};
use crate::spectra::{self, SpectraError};

#[derive(Debug, Error, PartialEq)]
pub enum CensusError {
    #[error("loop length {k} out of range 1..={n}")]
    LengthOutOfRange { k: usize, n: usize },
    #[error("{unit} cost {cost} exceeds budget {budget}")]
    ResourceBudgetExceeded { unit: &'static str, cost: u128, budget: u128 },
    #[error("Moebius sum {sum} for k = {k} is not divisible by k (implementation bug)")]
    DivisibilityViolation { k: usize, sum: BigInt },
    #[error("no spectral path applies to this graph (not simple, too large to diagonalize)")]
    SpectralUnavailable,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Default ceiling on DFS nodes visited while counting simple loops.
pub const DEFAULT_DFS_NODE_BUDGET: u64 = 200_000_000;
/// Default ceiling on matrix-vector products (`n*d * k`) in the exact trace.
pub const DEFAULT_TRACE_PRODUCT_BUDGET: u64 = 4_000_000;
/// Default ceiling on rooted walks (`n*d*(d-1)^(k-1)`) in the oracle.
pub const DEFAULT_ORACLE_WALK_BUDGET: u128 = 10_000_000;
/// Default dimension cap for the dense matrix-power witness.
pub const DEFAULT_DENSE_DIM: usize = 64;

/// Exact counts for one graph at one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopCensus {
    pub k: usize,
    pub n_simp: BigUint,
    pub n_prim: BigUint,
    pub n_tr: BigUint,
    pub n_all: BigUint,
}

/// Moebius function of `m >= 1`.
pub fn mobius(m: u64) -> i64 {
    assert!(m >= 1);
    let mut m = m;
    let mut factors = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if m > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `m >= 1`, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    assert!(m >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut f = 1;
    while f * f <= m {
        if m % f == 0 {
            small.push(f);
            if f != m / f {
                large.push(m / f);
            }
        }
        f += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

struct SimpleLoopDfs<'g> {
    g: &'g Multigraph,
    root: usize,
    first: usize,
    kmax: usize,
    visited: Vec<bool>,
    counts: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl SimpleLoopDfs<'_> {
    fn run(&mut self, e: usize, depth: usize) -> Result<(), CensusError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CensusError::ResourceBudgetExceeded {
                unit: "DFS nodes",
                cost: self.nodes as u128,
                budget: self.budget as u128,
            });
        }
        let g = self.g;
        let mate = g.mate(e);
        let head = g.vertex_of(mate);
        if head == self.root {
            // Closing the loop; the wrap condition bans returning along
            // the reversal of the first edge. No simple extension can
            // revisit the root, so this is a leaf either way.
            if mate != self.first {
                self.counts[depth] += 1;
            }
            return Ok(());
        }
        if depth == self.kmax || head < self.root || self.visited[head] {
            return Ok(());
        }
        self.visited[head] = true;
        for h in g.half_edges_at(head) {
            if h != mate {
                self.run(h, depth + 1)?;
            }
        }
        self.visited[head] = false;
        Ok(())
    }
}

/// Count oriented simple cyclically non-backtracking loops of every
/// length up to `kmax` in one DFS pass. Entry `[k]` of the result is
/// the length-`k` count; entry `[0]` is unused.
///
/// Each loop is counted exactly once: it is rooted at its minimum
/// vertex (visited once because the loop is simple), and the DFS from
/// that root never enters a smaller vertex.
pub fn count_simple_loops_upto(
    g: &Multigraph,
    kmax: usize,
    node_budget: u64,
) -> Result<Vec<u64>, CensusError> {
    let n = g.vertices();
    if kmax < 1 || kmax > n {
        return Err(CensusError::LengthOutOfRange { k: kmax, n });
    }
    let mut dfs = SimpleLoopDfs {
        g,
        root: 0,
        first: 0,
        kmax,
        visited: vec![false; n],
        counts: vec![0; kmax + 1],
        nodes: 0,
        budget: node_budget,
    };
    for root in 0..n {
        dfs.root = root;
        for h in g.half_edges_at(root) {
            dfs.first = h;
            dfs.run(h, 1)?;
        }
    }
    Ok(dfs.counts)
}

/// Number of oriented simple cyclically non-backtracking loops of
/// length `k`, up to cyclic shift. Length 1 counts two per self-loop,
/// length 2 two per unordered pair of parallel edges.
pub fn count_simple_loops(g: &Multigraph, k: usize) -> Result<BigUint, CensusError> {
    let counts = count_simple_loops_upto(g, k, DEFAULT_DFS_NODE_BUDGET)?;
    Ok(BigUint::from(counts[k]))
}

/// Traces of the first `kmax` powers of the non-backtracking operator,
/// exactly. Entry `[k]` is `Trace(A~^k)`; entry `[0]` is unused.
///
/// One indicator vector per directed edge is pushed through `kmax`
/// sparse applications; the budget counts those `n*d * kmax` products.
/// Work is split across basis vectors and reduced in ascending index
/// order, so results do not depend on thread scheduling.
pub fn nb_traces_upto(
    g: &Multigraph,
    kmax: usize,
    product_budget: u64,
) -> Result<Vec<BigUint>, CensusError> {
    assert!(kmax >= 1);
    let m = g.half_edges();
    let cost = (m as u128) * (kmax as u128);
    if cost > product_budget as u128 {
        return Err(CensusError::ResourceBudgetExceeded {
            unit: "trace products",
            cost,
            budget: product_budget as u128,
        });
    }
    let per_basis: Vec<Vec<BigUint>> = (0..m)
        .into_par_iter()
        .map(|e0| {
            let mut v: Vec<BigUint> = vec![BigUint::zero(); m];
            v[e0] = BigUint::one();
            let mut diag = Vec::with_capacity(kmax + 1);
            diag.push(BigUint::zero());
            let mut vertex_sum: Vec<BigUint> = vec![BigUint::zero(); g.vertices()];
            for _ in 0..kmax {
                for s in vertex_sum.iter_mut() {
                    s.set_zero();
                }
                for (h, val) in v.iter().enumerate() {
                    vertex_sum[g.vertex_of(h)] += val;
                }
                // next[f] = sum of v over successors of f
                //         = (sum of v at the head vertex) - v[mate(f)].
                let next: Vec<BigUint> = (0..m)
                    .map(|f| {
                        let mate = g.mate(f);
                        &vertex_sum[g.vertex_of(mate)] - &v[mate]
                    })
                    .collect();
                v = next;
                diag.push(v[e0].clone());
            }
            diag
        })
        .collect();

    let mut traces = vec![BigUint::zero(); kmax + 1];
    for diag in per_basis {
        for (k, d) in diag.into_iter().enumerate() {
            traces[k] += d;
        }
    }
    Ok(traces)
}

/// `Trace(A~^k)`: the number of closed non-backtracking walks of length
/// `k` rooted at a directed edge, wrap condition included.
pub fn count_closed_nb_walks_exact(g: &Multigraph, k: usize) -> Result<BigUint, CensusError> {
    let traces = nb_traces_upto(g, k, DEFAULT_TRACE_PRODUCT_BUDGET)?;
    Ok(traces[k].clone())
}

/// Dense big-integer matrix power trace; an independent witness for
/// [`count_closed_nb_walks_exact`] on graphs with `n*d <= max_dim`.
pub fn nb_trace_dense(g: &Multigraph, k: usize, max_dim: usize) -> Result<BigUint, CensusError> {
    assert!(k >= 1);
    let m = g.half_edges();
    if m > max_dim {
        return Err(CensusError::ResourceBudgetExceeded {
            unit: "dense dimension",
            cost: m as u128,
            budget: max_dim as u128,
        });
    }
    let base: Vec<Vec<BigUint>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let valid = g.vertex_of(g.mate(i)) == g.vertex_of(j) && j != g.mate(i);
                    if valid {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mul = |a: &Vec<Vec<BigUint>>, b: &Vec<Vec<BigUint>>| -> Vec<Vec<BigUint>> {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).map(|t| &a[i][t] * &b[t][j]).sum())
                    .collect()
            })
            .collect()
    };
    let mut pow = base.clone();
    for _ in 1..k {
        pow = mul(&pow, &base);
    }
    Ok((0..m).map(|i| pow[i][i].clone()).sum())
}

/// Moebius inversion applied to precomputed traces; `traces[r]` must
/// hold `Trace(A~^r)` for every divisor `r` of `k`.
pub fn count_primitive_loops_from_traces(
    traces: &[BigUint],
    k: usize,
) -> Result<BigUint, CensusError> {
    nprim_from_traces(traces, k)
}

fn nprim_from_traces(traces: &[BigUint], k: usize) -> Result<BigUint, CensusError> {
    let mut sum = BigInt::zero();
    for r in divisors(k as u64) {
        let mu = mobius(k as u64 / r);
        if mu != 0 {
            let t = BigInt::from(traces[r as usize].clone());
            if mu > 0 {
                sum += t;
            } else {
                sum -= t;
            }
        }
    }
    let k_big = BigInt::from(k);
    if sum.is_negative() || !(&sum % &k_big).is_zero() {
        return Err(CensusError::DivisibilityViolation { k, sum });
    }
    let q = sum / k_big;
    Ok(q.to_biguint().expect("quotient is non-negative"))
}

/// Number of primitive oriented loops of length `k`, by Moebius
/// inversion of the trace identity:
/// `k * n_prim(k) = sum over r|k of mobius(k/r) * n_tr(r)`.
pub fn count_primitive_loops(g: &Multigraph, k: usize) -> Result<BigUint, CensusError> {
    let traces = nb_traces_upto(g, k, DEFAULT_TRACE_PRODUCT_BUDGET)?;
    nprim_from_traces(&traces, k)
}

/// Number of oriented loops of length `k` with no primitivity
/// restriction: each is a power of a unique primitive loop of some
/// divisor length, so this is `sum over r|k of n_prim(r)`.
pub fn count_all_loops(g: &Multigraph, k: usize) -> Result<BigUint, CensusError> {
    let traces = nb_traces_upto(g, k, DEFAULT_TRACE_PRODUCT_BUDGET)?;
    let mut total = BigUint::zero();
    for r in divisors(k as u64) {
        total += nprim_from_traces(&traces, r as usize)?;
    }
    Ok(total)
}

/// All four exact counts at length `k` in one go.
///
/// `n_simp` is 0 (not an error) for `k > n`, where no simple loop fits.
pub fn full_census(g: &Multigraph, k: usize) -> Result<LoopCensus, CensusError> {
    let n_simp = if k <= g.vertices() {
        count_simple_loops(g, k)?
    } else {
        BigUint::zero()
    };
    let traces = nb_traces_upto(g, k, DEFAULT_TRACE_PRODUCT_BUDGET)?;
    let n_prim = nprim_from_traces(&traces, k)?;
    let mut n_all = BigUint::zero();
    for r in divisors(k as u64) {
        n_all += nprim_from_traces(&traces, r as usize)?;
    }
    Ok(LoopCensus { k, n_simp, n_prim, n_tr: traces[k].clone(), n_all })
}

/// Floating-point trace with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTrace {
    pub value: f64,
    /// Estimated relative error, propagated from eigensolver residuals.
    pub rel_error: f64,
}

/// Power sum of an already computed non-backtracking spectrum:
/// `sum_i mu_i^k` with a first-order perturbation error estimate (the
/// estimate carries a safety factor; it is reported, not assumed, and
/// tests check actual agreement against the exact trace).
pub fn spectral_trace_from_report(
    report: &spectra::SpectralReport,
    d: usize,
    k: usize,
) -> SpectralTrace {
    assert!(k >= 1 && d >= 2);
    let dm1 = (d - 1) as f64;
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    let mut err_abs = 0.0f64;
    for mu in &report.nb_eigenvalues {
        let p = mu.powu(k as u32);
        re += p.re;
        im += p.im;
        err_abs += k as f64 * mu.norm().powi(k as i32 - 1) * report.residual_bound;
    }
    let m = report.nb_eigenvalues.len();
    let scale = dm1.powi(k as i32);
    let rel = 8.0 * (err_abs + im.abs()) / scale + 1e-12 * (m as f64) * (k as f64);
    SpectralTrace { value: re, rel_error: rel }
}

/// `Trace(A~^k)` evaluated spectrally: `(d-1)^k (1 + sum over i>=2 of
/// (mu_i/(d-1))^k)`.
///
/// Simple graphs go through the adjacency spectrum and the
/// Glover-Kempton mapping; multigraphs fall back to direct
/// diagonalization of the non-backtracking matrix when it fits in
/// `direct_dim`, and error otherwise.
pub fn count_closed_nb_walks_spectral(
    g: &Multigraph,
    k: usize,
    direct_dim: usize,
) -> Result<SpectralTrace, CensusError> {
    assert!(k >= 1);
    let report = match spectra::spectral_report(g, direct_dim) {
        Ok(r) => r,
        Err(SpectraError::BudgetExceeded { .. }) => return Err(CensusError::SpectralUnavailable),
        Err(e) => return Err(e.into()),
    };
    Ok(spectral_trace_from_report(&report, g.degree(), k))
}

/// Exhaustively enumerate every oriented cyclically non-backtracking
/// loop of length `k` by walking all `n*d*(d-1)^(k-1)` rooted walks,
/// canonicalizing and deduplicating. Ground truth for the fast paths.
pub fn enumerate_loops_oracle(
    g: &Multigraph,
    k: usize,
    walk_budget: u128,
) -> Result<Vec<NbLoop>, CensusError> {
    assert!(k >= 1);
    let d = g.degree();
    let mut cost: u128 = (g.half_edges()) as u128;
    for _ in 1..k {
        cost = cost.saturating_mul((d.max(1) - 1) as u128);
    }
    if cost > walk_budget {
        return Err(CensusError::ResourceBudgetExceeded {
            unit: "oracle walks",
            cost,
            budget: walk_budget,
        });
    }
    let mut found: std::collections::BTreeSet<NbLoop> = std::collections::BTreeSet::new();
    let mut stack: Vec<DirectedEdge> = Vec::with_capacity(k);
    for h in 0..g.half_edges() {
        stack.push(DirectedEdge(h));
        extend(g, k, &mut stack, &mut found);
        stack.pop();
    }
    return Ok(found.into_iter().collect());

    fn extend(
        g: &Multigraph,
        k: usize,
        stack: &mut Vec<DirectedEdge>,
        found: &mut std::collections::BTreeSet<NbLoop>,
    ) {
        if stack.len() == k {
            let first = stack[0];
            let last = *stack.last().expect("stack is non-empty");
            if g.head(last) == g.tail(first) && g.mate(last.0) != first.0 {
                let l = nbcore::canonical_loop(g, stack).expect("walk is a closed nb loop");
                found.insert(l);
            }
            return;
        }
        let last = *stack.last().expect("stack is non-empty");
        let head = g.head(last);
        let banned = g.mate(last.0);
        for h in g.half_edges_at(head) {
            if h != banned {
                stack.push(DirectedEdge(h));
                extend(g, k, stack, found);
                stack.pop();
            }
        }
    }
}
