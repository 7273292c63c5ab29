//! Small named graphs used throughout the tests and docs.

use crate::multigraph::Multigraph;

/// Complete graph on 4 vertices (3-regular, simple, girth 3).
///
/// Half-edges `3v..3v+3` at vertex `v`; edge list (0,1) (0,2) (0,3)
/// (1,2) (1,3) (2,3).
pub fn k4() -> Multigraph {
    Multigraph::from_pairing(3, 4, vec![3, 6, 9, 0, 7, 10, 1, 4, 11, 2, 5, 8])
        .expect("K4 pairing is valid")
}

/// Two vertices joined by three parallel edges (3-regular, bipartite).
pub fn b2() -> Multigraph {
    Multigraph::from_pairing(3, 2, vec![3, 4, 5, 0, 1, 2]).expect("B2 pairing is valid")
}

/// One vertex with a single self-loop (2-regular).
pub fn self_loop() -> Multigraph {
    Multigraph::from_pairing(2, 1, vec![1, 0]).expect("loop pairing is valid")
}

/// 3-regular graph on 6 vertices containing a theta subgraph:
/// hubs 0 and 1 joined by three length-2 paths through 2, 3, 4, with
/// vertex 5 tied to the three midpoints. Walks across the theta have
/// cycle rank 2, which the excess diagnostics rely on.
pub fn theta6() -> Multigraph {
    Multigraph::from_pairing(
        3,
        6,
        vec![6, 9, 12, 7, 10, 13, 0, 3, 15, 1, 4, 16, 2, 5, 17, 8, 11, 14],
    )
    .expect("theta pairing is valid")
}
