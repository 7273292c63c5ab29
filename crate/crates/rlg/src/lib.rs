//! Random regular graphs and their non-backtracking loop census.
//!
//! Pipeline, bottom up: [`multigraph`] gives the half-edge substrate,
//! [`sampler`] draws from the configuration model or the uniform
//! simple-graph model, [`nbcore`] defines non-backtracking walks and
//! loops, [`census`] counts simple/primitive/all loops exactly (with a
//! spectral route for long lengths), [`spectra`] relates the adjacency
//! and non-backtracking spectra, [`theory`] evaluates the exact
//! closed-form expectations, and [`experiments`] runs reproducible
//! Monte Carlo sweeps over `(n, k)` grids. Everything stochastic is
//! keyed by an [`rng::RngStream`], so identical inputs give identical
//! outputs regardless of thread count.

pub mod census;
pub mod experiments;
pub mod fixtures;
pub mod multigraph;
pub mod nbcore;
pub mod plot;
pub mod rng;
pub mod sampler;
pub mod spectra;
pub mod theory;
