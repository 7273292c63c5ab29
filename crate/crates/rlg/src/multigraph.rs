//! Half-edge representation of `d`-regular multigraphs.
//!
//! A graph on `n` vertices is stored as a single pairing array over the
//! `n*d` half-edges: `pairing[h]` is the half-edge matched with `h`.
//! Half-edge `h` belongs to vertex `h / d`, so the pairing array alone
//! determines the graph, and serialized graphs are portable.
//!
//! Directed edges are identified with their tail half-edge, giving
//! exactly `n*d` of them; this index set doubles as the state space of
//! the non-backtracking walk operator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultigraphError {
    #[error("pairing is not an involution at half-edge {0}")]
    NotInvolution(usize),
    #[error("pairing has a fixed point at half-edge {0}")]
    FixedPoint(usize),
    #[error("n*d = {0} is odd, half-edges cannot be perfectly matched")]
    OddHalfEdges(usize),
    #[error("pairing length {got} does not match n*d = {want}")]
    BadLength { got: usize, want: usize },
    #[error("half-edge index {0} out of range")]
    IndexOutOfRange(usize),
}

/// A directed edge, identified with its tail half-edge.
///
/// Its head vertex is the vertex of `pairing[tail]`, and its reversal
/// is the directed edge with tail `pairing[tail]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge(pub usize);

/// A `d`-regular multigraph on `n` vertices as a half-edge pairing.
///
/// Invariants (checked at construction): the pairing is a fixed-point
/// free involution on `[0, n*d)`, and `n*d` is even. Immutable after
/// construction, so shared read access from many workers is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    d: usize,
    n: usize,
    pairing: Vec<usize>,
}

/// On-disk JSON form: `{"d": int, "n": int, "pairing": [int, ...]}`.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    d: usize,
    n: usize,
    pairing: Vec<usize>,
}

impl Multigraph {
    /// Validate a pairing array and wrap it as a graph.
    pub fn from_pairing(d: usize, n: usize, pairing: Vec<usize>) -> Result<Self, MultigraphError> {
        let m = n * d;
        if m % 2 != 0 {
            return Err(MultigraphError::OddHalfEdges(m));
        }
        if pairing.len() != m {
            return Err(MultigraphError::BadLength { got: pairing.len(), want: m });
        }
        for (h, &p) in pairing.iter().enumerate() {
            if p >= m {
                return Err(MultigraphError::IndexOutOfRange(p));
            }
            if p == h {
                return Err(MultigraphError::FixedPoint(h));
            }
            if pairing[p] != h {
                return Err(MultigraphError::NotInvolution(h));
            }
        }
        Ok(Self { d, n, pairing })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    /// Number of half-edges, `n*d`; also the number of directed edges.
    pub fn half_edges(&self) -> usize {
        self.n * self.d
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// The half-edge matched with `h`.
    #[inline]
    pub fn mate(&self, h: usize) -> usize {
        self.pairing[h]
    }

    /// Vertex owning half-edge `h`, i.e. `h / d`.
    #[inline]
    pub fn vertex_of(&self, h: usize) -> usize {
        debug_assert!(h < self.half_edges());
        h / self.d
    }

    /// Checked variant of [`vertex_of`](Self::vertex_of).
    pub fn try_vertex_of(&self, h: usize) -> Result<usize, MultigraphError> {
        if h < self.half_edges() {
            Ok(h / self.d)
        } else {
            Err(MultigraphError::IndexOutOfRange(h))
        }
    }

    /// Head vertex of the directed edge with tail `h`.
    #[inline]
    pub fn head(&self, e: DirectedEdge) -> usize {
        self.vertex_of(self.pairing[e.0])
    }

    /// Tail vertex of the directed edge with tail `h`.
    #[inline]
    pub fn tail(&self, e: DirectedEdge) -> usize {
        self.vertex_of(e.0)
    }

    /// The directed edge with opposite orientation.
    #[inline]
    pub fn reverse(&self, e: DirectedEdge) -> DirectedEdge {
        DirectedEdge(self.pairing[e.0])
    }

    /// Half-edge indices incident to vertex `v`, ascending.
    #[inline]
    pub fn half_edges_at(&self, v: usize) -> std::ops::Range<usize> {
        v * self.d..(v + 1) * self.d
    }

    /// `(has_self_loop, has_multi_edge)`.
    ///
    /// A multi-edge means two distinct half-edge pairs join the same
    /// unordered vertex pair; two self-loops at the same vertex count
    /// as a multi-edge of that pair, a single one does not.
    pub fn structure_flags(&self) -> (bool, bool) {
        let mut has_self_loop = false;
        let mut has_multi_edge = false;
        let mut seen: std::collections::HashMap<(usize, usize), u32> =
            std::collections::HashMap::new();
        for h in 0..self.half_edges() {
            let p = self.pairing[h];
            if h < p {
                let (u, v) = (self.vertex_of(h), self.vertex_of(p));
                let key = if u <= v { (u, v) } else { (v, u) };
                if u == v {
                    has_self_loop = true;
                }
                let c = seen.entry(key).or_insert(0);
                *c += 1;
                if *c > 1 {
                    has_multi_edge = true;
                }
            }
        }
        (has_self_loop, has_multi_edge)
    }

    /// `true` when there are no self-loops and no multi-edges.
    pub fn is_simple(&self) -> bool {
        self.structure_flags() == (false, false)
    }

    /// Symmetric integer adjacency matrix, row-major.
    ///
    /// `A[u][v]` is the number of half-edge pairs joining `u` and `v`;
    /// each self-loop contributes 2 to the diagonal so that every row
    /// sums to `d`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; self.n]; self.n];
        for h in 0..self.half_edges() {
            let p = self.pairing[h];
            if h < p {
                let (u, v) = (self.vertex_of(h), self.vertex_of(p));
                a[u][v] += 1;
                a[v][u] += 1;
                // u == v lands here twice, giving the diagonal 2 per loop.
            }
        }
        a
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile { d: self.d, n: self.n, pairing: self.pairing.clone() };
        serde_json::to_string(&file).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, MultigraphParseError> {
        let file: GraphFile = serde_json::from_str(text)?;
        Ok(Self::from_pairing(file.d, file.n, file.pairing)?)
    }
}

#[derive(Debug, Error)]
pub enum MultigraphParseError {
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] MultigraphError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn smallest_valid_pairing() {
        let g = Multigraph::from_pairing(1, 2, vec![1, 0]).unwrap();
        assert_eq!(g.vertex_of(0), 0);
        assert_eq!(g.vertex_of(1), 1);
        assert_eq!(g.structure_flags(), (false, false));
    }

    #[test]
    fn single_self_loop() {
        let g = Multigraph::from_pairing(2, 1, vec![1, 0]).unwrap();
        assert_eq!(g.structure_flags(), (true, false));
        assert_eq!(g.adjacency_matrix(), vec![vec![2]]);
    }

    #[test]
    fn fixed_point_rejected() {
        assert_eq!(
            Multigraph::from_pairing(1, 2, vec![0, 1]),
            Err(MultigraphError::FixedPoint(0))
        );
    }

    #[test]
    fn non_involution_rejected() {
        // 0 -> 1 but 1 -> 2.
        assert_eq!(
            Multigraph::from_pairing(2, 2, vec![1, 2, 3, 2]),
            Err(MultigraphError::NotInvolution(0))
        );
    }

    #[test]
    fn odd_half_edges_rejected() {
        assert!(matches!(
            Multigraph::from_pairing(3, 3, vec![0; 9]),
            Err(MultigraphError::OddHalfEdges(9))
        ));
    }

    #[test]
    fn vertex_of_examples() {
        let g = fixtures::k4();
        assert_eq!(g.vertex_of(0), 0);
        assert_eq!(g.vertex_of(5), 1);
        assert_eq!(g.vertex_of(11), 3);
        assert!(g.try_vertex_of(12).is_err());
    }

    #[test]
    fn k4_is_simple_with_unit_adjacency() {
        let g = fixtures::k4();
        assert_eq!(g.structure_flags(), (false, false));
        let a = g.adjacency_matrix();
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(a[u][v], u64::from(u != v));
            }
        }
    }

    #[test]
    fn b2_has_multi_edges_only() {
        let g = fixtures::b2();
        assert_eq!(g.structure_flags(), (false, true));
        assert_eq!(g.adjacency_matrix(), vec![vec![0, 3], vec![3, 0]]);
    }

    #[test]
    fn row_sums_equal_degree() {
        for g in [fixtures::k4(), fixtures::b2(), fixtures::theta6()] {
            for row in g.adjacency_matrix() {
                assert_eq!(row.iter().sum::<u64>(), g.degree() as u64);
            }
        }
    }

    #[test]
    fn reversal_is_fixed_point_free_involution() {
        let g = fixtures::k4();
        for h in 0..g.half_edges() {
            let e = DirectedEdge(h);
            let r = g.reverse(e);
            assert_ne!(r, e);
            assert_eq!(g.reverse(r), e);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = fixtures::b2();
        let text = g.to_json();
        assert_eq!(text, r#"{"d":3,"n":2,"pairing":[3,4,5,0,1,2]}"#);
        let back = Multigraph::from_json(&text).unwrap();
        assert_eq!(back, g);
    }
}
