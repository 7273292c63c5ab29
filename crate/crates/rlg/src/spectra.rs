//! Spectra of the adjacency and non-backtracking operators.
//!
//! For a `d`-regular graph the adjacency matrix `A` is symmetric with
//! top eigenvalue `d`; `lambda = max(|lambda_2|, |lambda_n|)` measures
//! its spectral gap. The non-backtracking operator has `n*d` complex
//! eigenvalues; on *simple* graphs they come from the adjacency
//! spectrum via the Ihara-form mapping
//!
//! ```text
//! mu_i = (lambda_i +- sqrt(lambda_i^2 - 4(d-1))) / 2,   plus +-1 each
//! with multiplicity n*d/2 - n.
//! ```
//!
//! The +-1 multiplicity convention is validated empirically against
//! direct diagonalization rather than trusted: whether the mapping
//! extends verbatim to multigraphs with self-loops is not settled, so
//! multigraphs always take the direct route and any discrepancy on the
//! simple route would fail the multiset-agreement tests.
//!
//! Eigensolvers are used behind residual contracts (symmetric solve:
//! all `n` eigenvalues with residual below `1e-9 * d`); no particular
//! algorithm is promised.

use nalgebra::{Complex, DMatrix, Schur, SymmetricEigen};
use thiserror::Error;

use crate::multigraph::Multigraph;

#[derive(Debug, Error, PartialEq)]
pub enum SpectraError {
    #[error("eigensolver failed to converge (residual {residual} > {limit})")]
    ConvergenceFailure { residual: f64, limit: f64 },
    #[error("need at least two eigenvalues, got {0}")]
    TooFewEigenvalues(usize),
    #[error("matrix dimension {dim} exceeds diagonalization budget {budget}")]
    BudgetExceeded { dim: usize, budget: usize },
    #[error("f(x) is not real for x = {x} < 2*sqrt(d-1) = {floor}")]
    DomainError { x: f64, floor: f64 },
    #[error("no eigenvalue within {tol} of the Perron value {perron}")]
    MissingPerron { perron: f64, tol: f64 },
}

/// Default dimension cap for direct non-backtracking diagonalization.
pub const DEFAULT_DIRECT_DIM: usize = 2000;

/// Adjacency eigenvalues, descending, with the verified residual bound
/// `max_i ||A v_i - lambda_i v_i||`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencySpectrum {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

/// Non-backtracking eigenvalues (canonically sorted) with a backward
/// error measure of the underlying Schur factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct NbSpectrum {
    pub eigenvalues: Vec<Complex<f64>>,
    pub residual: f64,
}

/// Where a report's non-backtracking spectrum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbSource {
    GloverKempton,
    Direct,
}

/// Combined spectral summary of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub adjacency_eigenvalues: Vec<f64>,
    /// `max(|lambda_2|, |lambda_n|)`; absent for n = 1.
    pub lambda_gap: Option<f64>,
    pub nb_eigenvalues: Vec<Complex<f64>>,
    /// Largest magnitude after removing one Perron copy.
    pub mu_second: Option<f64>,
    pub residual_bound: f64,
    pub nb_source: NbSource,
}

/// Spectral-gap transfer bound: if `lambda <= d - epsilon` then
/// `mu <= bound < d - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBound {
    pub epsilon: f64,
    pub f_value: f64,
    pub bound: f64,
    pub delta: f64,
}

/// All eigenvalues of the symmetric adjacency matrix, descending.
pub fn adjacency_spectrum(g: &Multigraph) -> Result<AdjacencySpectrum, SpectraError> {
    let n = g.vertices();
    let a = g.adjacency_matrix();
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j] as f64);
    let limit = 1e-9 * g.degree().max(1) as f64;
    // A relative tolerance a few ulps above machine epsilon: the QR
    // iteration can stagnate just short of full precision otherwise.
    let eig = SymmetricEigen::try_new(m.clone(), 1e-13, 100_000)
        .ok_or(SpectraError::ConvergenceFailure { residual: f64::INFINITY, limit })?;
    let mut residual = 0.0f64;
    for i in 0..n {
        let v = eig.eigenvectors.column(i);
        let r = (&m * v - v * eig.eigenvalues[i]).norm();
        residual = residual.max(r);
    }
    if residual > limit {
        return Err(SpectraError::ConvergenceFailure { residual, limit });
    }
    let mut eigs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigs.sort_unstable_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    Ok(AdjacencySpectrum { eigenvalues: eigs, residual })
}

/// `lambda = max(|lambda_2|, |lambda_n|)` of a descending spectrum.
pub fn lambda_gap(eigenvalues: &[f64]) -> Result<f64, SpectraError> {
    if eigenvalues.len() < 2 {
        return Err(SpectraError::TooFewEigenvalues(eigenvalues.len()));
    }
    let second = eigenvalues[1].abs();
    let last = eigenvalues[eigenvalues.len() - 1].abs();
    Ok(second.max(last))
}

/// Map adjacency eigenvalues to the non-backtracking multiset
/// `{mu_i^+- } + {+1, -1 each with multiplicity n*d/2 - n}`; exactly
/// `n*d` values. Intended for simple graphs with `d >= 2`.
pub fn gk_map(adjacency_eigenvalues: &[f64], d: usize, n: usize) -> Vec<Complex<f64>> {
    assert_eq!(adjacency_eigenvalues.len(), n, "need all n eigenvalues");
    assert!(d >= 2, "mapping needs d >= 2");
    let dm1 = (d - 1) as f64;
    let mut out = Vec::with_capacity(n * d);
    for &lam in adjacency_eigenvalues {
        let disc = lam * lam - 4.0 * dm1;
        if disc >= 0.0 {
            let root = disc.sqrt();
            out.push(Complex::new((lam + root) / 2.0, 0.0));
            out.push(Complex::new((lam - root) / 2.0, 0.0));
        } else {
            let imag = (-disc).sqrt() / 2.0;
            out.push(Complex::new(lam / 2.0, imag));
            out.push(Complex::new(lam / 2.0, -imag));
        }
    }
    let extra = n * d / 2 - n;
    for _ in 0..extra {
        out.push(Complex::new(1.0, 0.0));
        out.push(Complex::new(-1.0, 0.0));
    }
    canonical_sort(&mut out);
    out
}

/// Assemble the non-backtracking 0/1 matrix explicitly and diagonalize
/// it. Works on any multigraph with `n*d <= budget`.
pub fn nb_spectrum_direct(g: &Multigraph, budget: usize) -> Result<NbSpectrum, SpectraError> {
    let m = g.half_edges();
    if m > budget {
        return Err(SpectraError::BudgetExceeded { dim: m, budget });
    }
    let a = DMatrix::from_fn(m, m, |i, j| {
        let valid = g.vertex_of(g.mate(i)) == g.vertex_of(j) && j != g.mate(i);
        if valid {
            1.0
        } else {
            0.0
        }
    });
    let limit = 1e-6 * (m as f64).sqrt().max(1.0);
    // Same stagnation caveat as the symmetric solve, but worse for the
    // non-normal case; 1e-12 converges reliably with residuals ~1e-13.
    let schur = Schur::try_new(a.clone(), 1e-12, 1_000_000)
        .ok_or(SpectraError::ConvergenceFailure { residual: f64::INFINITY, limit })?;
    let eigs = schur
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect::<Vec<Complex<f64>>>();
    let (q, t) = schur.unpack();
    let residual = (&a * &q - &q * &t).norm() / (a.norm().max(1.0));
    if residual > limit {
        return Err(SpectraError::ConvergenceFailure { residual, limit });
    }
    let mut eigenvalues = eigs;
    canonical_sort(&mut eigenvalues);
    Ok(NbSpectrum { eigenvalues, residual })
}

/// `f(x) = (x + sqrt(x^2 - 4(d-1))) / 2`, the larger root of the
/// mapping quadratic; real and increasing on `[2*sqrt(d-1), inf)`.
pub fn f_map(x: f64, d: usize) -> Result<f64, SpectraError> {
    let dm1 = (d - 1) as f64;
    let floor = 2.0 * dm1.sqrt();
    if x < floor - 1e-12 {
        return Err(SpectraError::DomainError { x, floor });
    }
    let disc = (x * x - 4.0 * dm1).max(0.0);
    Ok((x + disc.sqrt()) / 2.0)
}

/// The transfer bound `mu <= max(sqrt(d-1), f(d - epsilon))` packaged
/// with its gap `delta = (d-1) - bound`.
pub fn gap_bound(epsilon: f64, d: usize) -> Result<GapBound, SpectraError> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let f_value = f_map(d as f64 - epsilon, d)?;
    let dm1 = (d - 1) as f64;
    let bound = dm1.sqrt().max(f_value);
    Ok(GapBound { epsilon, f_value, bound, delta: dm1 - bound })
}

/// Remove one eigenvalue closest to the Perron value `d - 1` and return
/// the largest magnitude among the rest.
pub fn mu_second(nb_eigenvalues: &[Complex<f64>], d: usize) -> Result<f64, SpectraError> {
    let perron = (d - 1) as f64;
    let tol = 1e-6 * perron.max(1.0);
    let (idx, dist) = nb_eigenvalues
        .iter()
        .enumerate()
        .map(|(i, mu)| (i, (mu - Complex::new(perron, 0.0)).norm()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("distances are finite"))
        .ok_or(SpectraError::TooFewEigenvalues(0))?;
    if dist > tol {
        return Err(SpectraError::MissingPerron { perron, tol });
    }
    Ok(nb_eigenvalues
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, mu)| mu.norm())
        .fold(0.0, f64::max))
}

/// Sort complex values by (real, imaginary), quantized at 1e-9 so that
/// floating-point noise cannot reorder near-ties.
pub fn canonical_sort(values: &mut [Complex<f64>]) {
    let q = |x: f64| (x / 1e-9).round() as i64;
    values.sort_unstable_by_key(|c| (q(c.re), q(c.im)));
}

/// Multiset distance between two equal-size collections: greedily match
/// each value of one to the nearest unused value of the other and
/// report the worst matched distance. Exact for multisets whose
/// clusters are separated by much more than the tolerance being tested;
/// eigenvalue multiplicities (like the +-1 copies of the mapping) are
/// handled because ties absorb each other. Infinite if sizes differ.
pub fn multiset_distance(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut xs = a.to_vec();
    let ys = b.to_vec();
    canonical_sort(&mut xs);
    let mut used = vec![false; ys.len()];
    let mut worst = 0.0f64;
    for x in &xs {
        let mut best: Option<(usize, f64)> = None;
        for (j, y) in ys.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dist = (x - y).norm();
            if best.map_or(true, |(_, bd)| dist < bd) {
                best = Some((j, dist));
            }
        }
        match best {
            Some((j, dist)) => {
                used[j] = true;
                worst = worst.max(dist);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

/// Full spectral summary: adjacency spectrum always; non-backtracking
/// spectrum via the mapping on simple graphs, by direct diagonalization
/// otherwise (within `direct_budget`).
pub fn spectral_report(g: &Multigraph, direct_budget: usize) -> Result<SpectralReport, SpectraError> {
    let adj = adjacency_spectrum(g)?;
    let lambda = if g.vertices() >= 2 {
        Some(lambda_gap(&adj.eigenvalues)?)
    } else {
        None
    };
    let (nb, source, residual) = if g.is_simple() && g.degree() >= 2 {
        let nb = gk_map(&adj.eigenvalues, g.degree(), g.vertices());
        (nb, NbSource::GloverKempton, adj.residual)
    } else {
        let direct = nb_spectrum_direct(g, direct_budget)?;
        let r = direct.residual.max(adj.residual);
        (direct.eigenvalues, NbSource::Direct, r)
    };
    let mu = mu_second(&nb, g.degree()).ok();
    Ok(SpectralReport {
        adjacency_eigenvalues: adj.eigenvalues,
        lambda_gap: lambda,
        nb_eigenvalues: nb,
        mu_second: mu,
        residual_bound: residual,
        nb_source: source,
    })
}
