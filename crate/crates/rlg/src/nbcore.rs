//! Non-backtracking walk semantics: step validity, cyclic loops up to
//! shift, simplicity, primitivity, induced-subgraph excess, and a
//! uniform non-backtracking walk sampler.
//!
//! A walk is a chained sequence of directed edges. A loop is a closed
//! walk considered up to cyclic shift of its edge sequence; orientation
//! is *not* quotiented, so a loop and its reversal are distinct. A loop
//! is cyclically non-backtracking when no step, including the wrap from
//! the last edge to the first, reverses the previous edge.
//!
//! Multigraph corner cases are not spelled out by the usual treatment
//! of these definitions but are forced by them: a self-loop yields two
//! oriented length-1 loops (one per orientation, both simple), and each
//! unordered pair of parallel edges yields two oriented length-2 loops.
//! Code below takes these conventions as definitional.

use rand::Rng;
use thiserror::Error;

use crate::multigraph::{DirectedEdge, Multigraph};
use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NbError {
    #[error("edge sequence is empty")]
    Empty,
    #[error("edges {0} and {1} are not chained")]
    NotChained(usize, usize),
    #[error("sequence is not a closed walk")]
    NotClosed,
    #[error("sequence backtracks at position {0}")]
    Backtracking(usize),
}

/// A chained sequence of directed edges on some graph.
///
/// The graph is passed alongside rather than stored; a walk is only
/// meaningful against the graph it was built on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub edges: Vec<DirectedEdge>,
}

/// A closed cyclically non-backtracking loop in canonical form
/// (lexicographically minimal rotation of tail indices), with its
/// period and simplicity precomputed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NbLoop {
    pub edges: Vec<DirectedEdge>,
    pub period: usize,
    pub simple: bool,
}

impl NbLoop {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// A loop is primitive when it is not a proper power of a shorter
    /// loop, i.e. its period equals its length.
    pub fn primitive(&self) -> bool {
        self.period == self.edges.len()
    }
}

/// The `d - 1` directed edges that may follow `e` in a non-backtracking
/// walk: every edge leaving the head of `e` except the reversal of `e`.
/// Ascending tail order. A self-loop orientation is its own valid
/// successor, which is why the count is `d - 1` on every multigraph.
pub fn nb_successors(g: &Multigraph, e: DirectedEdge) -> Vec<DirectedEdge> {
    let head = g.head(e);
    let banned = g.mate(e.0);
    g.half_edges_at(head)
        .filter(|&h| h != banned)
        .map(DirectedEdge)
        .collect()
}

/// Whether `e2` may follow `e1` in a non-backtracking walk.
#[inline]
pub fn nb_step_valid(g: &Multigraph, e1: DirectedEdge, e2: DirectedEdge) -> bool {
    g.head(e1) == g.tail(e2) && e2.0 != g.mate(e1.0)
}

fn check_chained(g: &Multigraph, edges: &[DirectedEdge]) -> Result<(), NbError> {
    if edges.is_empty() {
        return Err(NbError::Empty);
    }
    for w in edges.windows(2) {
        if g.head(w[0]) != g.tail(w[1]) {
            return Err(NbError::NotChained(w[0].0, w[1].0));
        }
    }
    Ok(())
}

/// Whether a chained sequence is a closed walk.
pub fn is_closed(g: &Multigraph, edges: &[DirectedEdge]) -> bool {
    !edges.is_empty() && g.head(edges[edges.len() - 1]) == g.tail(edges[0])
}

/// Cyclic non-backtracking test for a closed chained sequence: no edge
/// is followed by its own reversal, including the wrap from the last
/// edge back to the first.
pub fn is_cyclically_nb(g: &Multigraph, edges: &[DirectedEdge]) -> Result<bool, NbError> {
    check_chained(g, edges)?;
    if !is_closed(g, edges) {
        return Err(NbError::NotClosed);
    }
    let k = edges.len();
    Ok((0..k).all(|i| edges[(i + 1) % k].0 != g.mate(edges[i].0)))
}

/// Lexicographically minimal rotation of a sequence of tail indices.
fn min_rotation(tails: &[usize]) -> usize {
    let k = tails.len();
    let mut best = 0;
    for cand in 1..k {
        for i in 0..k {
            let a = tails[(cand + i) % k];
            let b = tails[(best + i) % k];
            if a != b {
                if a < b {
                    best = cand;
                }
                break;
            }
        }
    }
    best
}

/// Smallest `p` dividing `k` with the sequence invariant under rotation
/// by `p`.
fn period_of(tails: &[usize]) -> usize {
    let k = tails.len();
    for p in 1..=k {
        if k % p != 0 {
            continue;
        }
        if (0..k).all(|i| tails[i] == tails[(i + p) % k]) {
            return p;
        }
    }
    k
}

/// Canonicalize a closed cyclically non-backtracking walk into an
/// [`NbLoop`]: rotate to the minimal tail sequence, record the period,
/// and mark simplicity (all head vertices distinct).
pub fn canonical_loop(g: &Multigraph, edges: &[DirectedEdge]) -> Result<NbLoop, NbError> {
    check_chained(g, edges)?;
    if !is_closed(g, edges) {
        return Err(NbError::NotClosed);
    }
    let k = edges.len();
    for i in 0..k {
        if edges[(i + 1) % k].0 == g.mate(edges[i].0) {
            return Err(NbError::Backtracking(i));
        }
    }
    let tails: Vec<usize> = edges.iter().map(|e| e.0).collect();
    let r = min_rotation(&tails);
    let rotated: Vec<DirectedEdge> = (0..k).map(|i| edges[(r + i) % k]).collect();
    let rotated_tails: Vec<usize> = rotated.iter().map(|e| e.0).collect();
    let period = period_of(&rotated_tails);
    let mut heads: Vec<usize> = rotated.iter().map(|&e| g.head(e)).collect();
    heads.sort_unstable();
    let simple = heads.windows(2).all(|w| w[0] != w[1]);
    Ok(NbLoop { edges: rotated, period, simple })
}

/// Reversal of a loop or walk: reverse each edge and the traversal
/// order. Maps cyclically non-backtracking loops to loops and never
/// fixes one (the pairing has no fixed points).
pub fn reverse_walk(g: &Multigraph, edges: &[DirectedEdge]) -> Vec<DirectedEdge> {
    edges.iter().rev().map(|&e| g.reverse(e)).collect()
}

/// Cycle rank `E - V + C` of the subgraph induced by a chained edge
/// sequence: `E` distinct undirected edges (parallel edges counted as
/// distinct), `V` distinct visited vertices, `C` connected components.
/// This counts the independent cycles the walk has traced out.
pub fn walk_excess(g: &Multigraph, edges: &[DirectedEdge]) -> Result<i64, NbError> {
    check_chained(g, edges)?;
    let mut verts: Vec<usize> = Vec::new();
    let mut undirected: Vec<usize> = Vec::new();
    for &e in edges {
        verts.push(g.tail(e));
        verts.push(g.head(e));
        undirected.push(e.0.min(g.mate(e.0)));
    }
    verts.sort_unstable();
    verts.dedup();
    undirected.sort_unstable();
    undirected.dedup();

    // Union-find over the visited vertices.
    let index = |v: usize| verts.binary_search(&v).expect("visited vertex");
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &h in &undirected {
        let a = find(&mut parent, index(g.vertex_of(h)));
        let b = find(&mut parent, index(g.vertex_of(g.mate(h))));
        if a != b {
            parent[a] = b;
        }
    }
    let mut roots: Vec<usize> = (0..verts.len()).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();

    Ok(undirected.len() as i64 - verts.len() as i64 + roots.len() as i64)
}

/// Sample a uniformly random non-backtracking walk of length `k`:
/// uniform start vertex, uniform first edge among its `d`, then uniform
/// among the `d - 1` successors at each step. Every one of the
/// `n*d*(d-1)^(k-1)` walks is equally likely.
pub fn sample_nb_walk(g: &Multigraph, k: usize, stream: RngStream) -> Walk {
    assert!(k >= 1, "walk length must be at least 1");
    assert!(g.degree() >= 2, "non-backtracking walks need d >= 2");
    let mut rng = stream.rng();
    let v = rng.random_range(0..g.vertices());
    let first = v * g.degree() + rng.random_range(0..g.degree());
    let mut edges = Vec::with_capacity(k);
    edges.push(DirectedEdge(first));
    for _ in 1..k {
        let e = *edges.last().expect("walk is non-empty");
        let head = g.head(e);
        let banned = g.mate(e.0);
        let choice = rng.random_range(0..g.degree() - 1);
        // banned lies at the head vertex; skip over it while indexing
        // the d-1 options.
        let mut h = head * g.degree() + choice;
        if h >= banned {
            h += 1;
        }
        edges.push(DirectedEdge(h));
    }
    Walk { edges }
}
