//! Samplers for the configuration model and the uniform simple-graph
//! model, plus exhaustive pairing enumeration for tiny instances.
//!
//! The configuration model pairs the lowest-index unpaired half-edge
//! with a uniform choice among the rest until none remain. The choice
//! of which half-edge to process next does not affect the resulting
//! distribution (any rule yields a uniform perfect matching), but
//! fixing the lowest-index rule makes every draw reproducible from its
//! [`RngStream`] alone.

use rand::Rng;
use thiserror::Error;

use crate::multigraph::{Multigraph, MultigraphError};
use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SamplerError {
    #[error("n*d = {0} is odd, no perfect matching of half-edges exists")]
    OddHalfEdges(usize),
    #[error("no simple graph found within {0} rejection attempts")]
    RejectionBudgetExhausted(u64),
    #[error("(n*d - 1)!! = {count} pairings exceed the enumeration budget {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error(transparent)]
    Graph(#[from] MultigraphError),
}

/// Default ceiling on `(n*d - 1)!!` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

/// Draw a graph from the configuration model `G(d, n)`.
///
/// The pairing is a uniformly random perfect matching of the `n*d`
/// half-edges; same stream, same graph, regardless of thread count.
pub fn sample_configuration(
    d: usize,
    n: usize,
    stream: RngStream,
) -> Result<Multigraph, SamplerError> {
    let m = n * d;
    if m % 2 != 0 {
        return Err(SamplerError::OddHalfEdges(m));
    }
    let mut rng = stream.rng();
    let mut pairing = vec![usize::MAX; m];
    // pool holds the unpaired half-edges; pos[h] is h's slot in pool.
    let mut pool: Vec<usize> = (0..m).collect();
    let mut pos: Vec<usize> = (0..m).collect();
    let remove = |pool: &mut Vec<usize>, pos: &mut Vec<usize>, h: usize| {
        let i = pos[h];
        let last = *pool.last().expect("pool is non-empty");
        pool[i] = last;
        pos[last] = i;
        pool.pop();
    };
    for h in 0..m {
        if pairing[h] != usize::MAX {
            continue;
        }
        // h is the lowest unpaired half-edge; every unpaired one is > h.
        remove(&mut pool, &mut pos, h);
        let j = rng.random_range(0..pool.len());
        let mate = pool[j];
        remove(&mut pool, &mut pos, mate);
        pairing[h] = mate;
        pairing[mate] = h;
    }
    Ok(Multigraph::from_pairing(d, n, pairing)?)
}

/// Draw a uniformly random simple `d`-regular graph by rejection from
/// the configuration model.
///
/// Conditional uniformity of the configuration model makes the first
/// accepted draw uniform over simple graphs.
pub fn sample_uniform_simple(
    d: usize,
    n: usize,
    stream: RngStream,
    max_attempts: u64,
) -> Result<Multigraph, SamplerError> {
    for attempt in 0..max_attempts {
        let g = sample_configuration(d, n, stream.child(attempt))?;
        if g.is_simple() {
            return Ok(g);
        }
    }
    Err(SamplerError::RejectionBudgetExhausted(max_attempts))
}

/// `(m - 1)!! = m-1 times m-3 times ...`, the number of perfect
/// matchings of `m` labeled points. Saturates at `u128::MAX`.
pub fn double_factorial_matchings(m: usize) -> u128 {
    if m % 2 != 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut f = m.saturating_sub(1);
    while f > 1 {
        acc = acc.saturating_mul(f as u128);
        f -= 2;
    }
    acc
}

/// Visit every perfect matching of the `n*d` half-edges exactly once.
///
/// Enumeration order is canonical: the lowest unpaired half-edge is
/// matched with each larger unpaired candidate in increasing order,
/// recursing on the remainder. Returns the number of pairings visited,
/// which always equals `(n*d - 1)!!`.
pub fn enumerate_all_pairings<F>(
    d: usize,
    n: usize,
    budget: u128,
    mut visit: F,
) -> Result<u128, SamplerError>
where
    F: FnMut(&Multigraph),
{
    let m = n * d;
    if m % 2 != 0 {
        return Err(SamplerError::OddHalfEdges(m));
    }
    let count = double_factorial_matchings(m);
    if count > budget {
        return Err(SamplerError::BudgetExceeded { count, budget });
    }
    let mut pairing = vec![usize::MAX; m];
    let mut visited = 0u128;
    recurse(d, n, &mut pairing, 0, &mut visited, &mut visit);
    debug_assert_eq!(visited, count);
    return Ok(visited);

    fn recurse<F: FnMut(&Multigraph)>(
        d: usize,
        n: usize,
        pairing: &mut Vec<usize>,
        from: usize,
        visited: &mut u128,
        visit: &mut F,
    ) {
        let m = pairing.len();
        let mut h = from;
        while h < m && pairing[h] != usize::MAX {
            h += 1;
        }
        if h == m {
            let g = Multigraph::from_pairing(d, n, pairing.clone())
                .expect("enumerated pairing is a valid involution");
            *visited += 1;
            visit(&g);
            return;
        }
        for mate in h + 1..m {
            if pairing[mate] != usize::MAX {
                continue;
            }
            pairing[h] = mate;
            pairing[mate] = h;
            recurse(d, n, pairing, h + 1, visited, visit);
            pairing[h] = usize::MAX;
            pairing[mate] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_half_edges_rejected() {
        assert_eq!(
            sample_configuration(3, 3, RngStream::root(1)),
            Err(SamplerError::OddHalfEdges(9))
        );
    }

    #[test]
    fn unique_matching_for_single_edge() {
        for seed in 0..20 {
            let g = sample_configuration(1, 2, RngStream::root(seed)).unwrap();
            assert_eq!(g.pairing(), &[1, 0]);
        }
    }

    #[test]
    fn fixed_stream_is_reproducible() {
        let s = RngStream::new(12345, 9);
        let a = sample_configuration(3, 2, s).unwrap();
        let b = sample_configuration(3, 2, s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_graphs_satisfy_invariants() {
        for seed in 0..50 {
            let g = sample_configuration(3, 8, RngStream::root(seed)).unwrap();
            // from_pairing re-validates; spot-check regularity too.
            for row in g.adjacency_matrix() {
                assert_eq!(row.iter().sum::<u64>(), 3);
            }
        }
    }

    #[test]
    fn uniform_simple_on_four_vertices_is_k4_shaped() {
        // K4 is the only simple 3-regular graph on 4 vertices, so every
        // accepted sample must have its adjacency matrix.
        for seed in 0..10 {
            let g = sample_uniform_simple(3, 4, RngStream::root(seed), 10_000).unwrap();
            let a = g.adjacency_matrix();
            for u in 0..4 {
                for v in 0..4 {
                    assert_eq!(a[u][v], u64::from(u != v));
                }
            }
        }
    }

    #[test]
    fn uniform_simple_impossible_on_two_vertices() {
        // All 15 pairings of 6 half-edges on 2 vertices have a self-loop
        // or a multi-edge.
        assert_eq!(
            sample_uniform_simple(3, 2, RngStream::root(7), 100),
            Err(SamplerError::RejectionBudgetExhausted(100))
        );
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_matchings(2), 1);
        assert_eq!(double_factorial_matchings(6), 15);
        assert_eq!(double_factorial_matchings(12), 10395);
    }

    #[test]
    fn enumeration_counts_match_double_factorial() {
        let mut seen = 0u64;
        let total = enumerate_all_pairings(1, 2, 100, |_| seen += 1).unwrap();
        assert_eq!((total, seen), (1, 1));

        let mut count = 0u64;
        let total = enumerate_all_pairings(3, 2, 100, |_| count += 1).unwrap();
        assert_eq!((total, count), (15, 15));

        let mut count = 0u64;
        let total = enumerate_all_pairings(3, 4, 20_000, |_| count += 1).unwrap();
        assert_eq!((total, count), (10395, 10395));
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        assert!(matches!(
            enumerate_all_pairings(3, 4, 10, |_| ()),
            Err(SamplerError::BudgetExceeded { count: 10395, budget: 10 })
        ));
    }

    #[test]
    fn enumeration_order_is_canonical() {
        let mut first = None;
        enumerate_all_pairings(3, 2, 100, |g| {
            if first.is_none() {
                first = Some(g.pairing().to_vec());
            }
        })
        .unwrap();
        // Lowest half-edge matched with the smallest candidate first.
        assert_eq!(first.unwrap(), vec![1, 0, 3, 2, 5, 4]);
    }

    #[test]
    fn self_loop_frequency_matches_exhaustive_fraction() {
        // Exact fraction of the 15 pairings on (d=3, n=2) with a self-loop.
        let mut with_loop = 0u64;
        enumerate_all_pairings(3, 2, 100, |g| {
            if g.structure_flags().0 {
                with_loop += 1;
            }
        })
        .unwrap();
        let exact = with_loop as f64 / 15.0;

        let trials = 40_000u64;
        let hits = (0..trials)
            .filter(|&i| {
                sample_configuration(3, 2, RngStream::new(99, i))
                    .unwrap()
                    .structure_flags()
                    .0
            })
            .count() as f64;
        let freq = hits / trials as f64;
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!(
            (freq - exact).abs() < 3.0 * se,
            "freq {freq} vs exact {exact} (se {se})"
        );
    }
}
