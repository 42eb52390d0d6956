//! Edge shifts of finite type.
//!
//! Edges are indexed in the normative order `(source, target, copy)`; every
//! rule table in the crate refers to edges by this index.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::NonnegIntMatrix;

pub type EdgeId = u32;
pub type State = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub source: State,
    pub target: State,
    pub copy: u64,
}

/// Records that a shift was built as a Kronecker product, so product edges
/// can be split back into their factor edges.
#[derive(Debug)]
pub struct Factorization {
    pub left: Arc<EdgeShift>,
    pub right: Arc<EdgeShift>,
}

pub struct EdgeShift {
    matrix: NonnegIntMatrix,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    // first edge index for each (source, target) block
    block_start: Vec<usize>,
    irreducible: bool,
    primitive: bool,
    positive_entropy: bool,
    factors: Option<Factorization>,
}

impl EdgeShift {
    /// Builds the edge shift. Reducible or zero-entropy matrices are
    /// accepted and only flagged; see [`EdgeShift::warnings`].
    pub fn new(matrix: NonnegIntMatrix) -> Self {
        let k = matrix.size();
        let mut edges = Vec::with_capacity(matrix.entry_sum() as usize);
        let mut out_edges = vec![Vec::new(); k];
        let mut in_edges = vec![Vec::new(); k];
        let mut block_start = Vec::with_capacity(k * k + 1);
        for i in 0..k {
            for j in 0..k {
                block_start.push(edges.len());
                for copy in 0..matrix.get(i, j) {
                    let id = edges.len() as EdgeId;
                    edges.push(Edge { source: i, target: j, copy });
                    out_edges[i].push(id);
                    in_edges[j].push(id);
                }
            }
        }
        block_start.push(edges.len());
        let irreducible = matrix.is_irreducible();
        let primitive = irreducible && matrix.is_primitive();
        let positive_entropy = matrix.has_positive_entropy();
        Self { matrix, edges, out_edges, in_edges, block_start, irreducible, primitive, positive_entropy, factors: None }
    }

    pub fn full(symbols: u64) -> Result<Self> {
        Ok(Self::new(NonnegIntMatrix::full_shift(symbols)?))
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        Ok(Self::new(NonnegIntMatrix::new(rows)?))
    }

    pub fn matrix(&self) -> &NonnegIntMatrix {
        &self.matrix
    }

    pub fn num_states(&self) -> usize {
        self.matrix.size()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e as usize]
    }

    pub fn source(&self, e: EdgeId) -> State {
        self.edges[e as usize].source
    }

    /// The state at which edge `e` ends.
    pub fn target(&self, e: EdgeId) -> State {
        self.edges[e as usize].target
    }

    pub fn out_edges(&self, s: State) -> &[EdgeId] {
        &self.out_edges[s]
    }

    pub fn in_edges(&self, s: State) -> &[EdgeId] {
        &self.in_edges[s]
    }

    /// Edge `copy` among the parallel edges from `i` to `j`.
    pub fn edge_between(&self, i: State, j: State, copy: u64) -> Option<EdgeId> {
        let b = i * self.num_states() + j;
        let (lo, hi) = (self.block_start[b], self.block_start[b + 1]);
        let idx = lo + copy as usize;
        (idx < hi).then_some(idx as EdgeId)
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn has_positive_entropy(&self) -> bool {
        self.positive_entropy
    }

    pub fn warnings(&self) -> Vec<&'static str> {
        let mut w = Vec::new();
        if !self.irreducible {
            w.push("reducible");
        }
        if !self.positive_entropy {
            w.push("zero entropy");
        }
        w
    }

    /// Irreducible with positive entropy, as the theorem verifiers require.
    pub fn require_standard(&self) -> Result<()> {
        if !self.irreducible {
            return Err(Error::ReducibleInput);
        }
        if !self.positive_entropy {
            return Err(Error::ZeroEntropy);
        }
        Ok(())
    }

    pub fn same_shift(&self, other: &EdgeShift) -> bool {
        std::ptr::eq(self, other) || self.matrix == other.matrix
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if (e as usize) < self.edges.len() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e))
        }
    }

    pub fn check_word(&self, word: &[EdgeId]) -> Result<()> {
        for &e in word {
            self.check_edge(e)?;
        }
        for (i, pair) in word.windows(2).enumerate() {
            if self.target(pair[0]) != self.source(pair[1]) {
                return Err(Error::InadmissibleWord { position: i + 1 });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self, word: &[EdgeId]) -> bool {
        self.check_word(word).is_ok()
    }

    /// Number of admissible words of length `n`; 1 for the empty word.
    pub fn count_words(&self, n: usize) -> BigUint {
        self.matrix.path_count(n)
    }

    pub fn factors(&self) -> Option<&Factorization> {
        self.factors.as_ref()
    }

    /// Product edge made of edge `a` of the left factor and edge `b` of the
    /// right factor.
    pub fn product_edge(&self, a: EdgeId, b: EdgeId) -> Option<EdgeId> {
        let f = self.factors.as_ref()?;
        let (ea, eb) = (f.left.edge(a), f.right.edge(b));
        let q = f.right.num_states();
        let copy = ea.copy * f.right.matrix().get(eb.source, eb.target) + eb.copy;
        self.edge_between(ea.source * q + eb.source, ea.target * q + eb.target, copy)
    }

    /// Inverse of [`EdgeShift::product_edge`].
    pub fn split_edge(&self, e: EdgeId) -> Option<(EdgeId, EdgeId)> {
        let f = self.factors.as_ref()?;
        let edge = self.edge(e);
        let q = f.right.num_states();
        let (i1, j1) = (edge.source / q, edge.source % q);
        let (i2, j2) = (edge.target / q, edge.target % q);
        let nb = f.right.matrix().get(j1, j2);
        let a = f.left.edge_between(i1, i2, edge.copy / nb)?;
        let b = f.right.edge_between(j1, j2, edge.copy % nb)?;
        Some((a, b))
    }

    /// Attaches a factorization if this shift's matrix is the Kronecker
    /// product of the two factors.
    pub fn with_factors(self, left: Arc<EdgeShift>, right: Arc<EdgeShift>) -> Option<Self> {
        if left.matrix().kronecker(right.matrix()) != self.matrix {
            return None;
        }
        Some(Self { factors: Some(Factorization { left, right }), ..self })
    }
}

/// The product system; its edges are pairs of factor edges with the copy
/// index ordered lexicographically over the pair.
pub fn kronecker_product(a: &Arc<EdgeShift>, b: &Arc<EdgeShift>) -> EdgeShift {
    let m = a.matrix().kronecker(b.matrix());
    EdgeShift::new(m).with_factors(a.clone(), b.clone()).expect("kronecker matrix matches by construction")
}

/// The shift on `A^T` together with the edge bijection reversing each edge:
/// `bijection[e]` is the reversed copy of edge `e` in the transposed shift.
pub fn transpose_shift(shift: &EdgeShift) -> (EdgeShift, Vec<EdgeId>) {
    let t = EdgeShift::new(shift.matrix().transpose());
    let bijection = shift
        .edges()
        .iter()
        .map(|e| t.edge_between(e.target, e.source, e.copy).expect("transposed edge exists"))
        .collect();
    (t, bijection)
}

impl fmt::Debug for EdgeShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EdgeShift")
            .field("matrix", &self.matrix)
            .field("edges", &self.edges.len())
            .field("irreducible", &self.irreducible)
            .field("primitive", &self.primitive)
            .field("positive_entropy", &self.positive_entropy)
            .finish()
    }
}

impl PartialEq for EdgeShift {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_two_shift() {
        let s = EdgeShift::full(2).unwrap();
        assert_eq!(s.num_edges(), 2);
        assert!(s.is_irreducible() && s.is_primitive() && s.has_positive_entropy());
        assert_eq!(s.count_words(3), BigUint::from(8u32));
    }

    #[test]
    fn golden_mean_edges() {
        let s = EdgeShift::from_rows(vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(s.num_edges(), 3);
        assert!(s.is_irreducible());
        assert_eq!(s.count_words(0), BigUint::from(1u32));
        assert_eq!(s.count_words(2), BigUint::from(5u32));
        assert_eq!(s.edge(1), Edge { source: 0, target: 1, copy: 0 });
        assert!(s.is_admissible(&[0, 1, 2]));
        assert!(matches!(s.check_word(&[1, 1]), Err(Error::InadmissibleWord { position: 1 })));
    }

    #[test]
    fn identity_is_flagged_reducible() {
        let s = EdgeShift::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!s.is_irreducible());
        assert_eq!(s.warnings(), vec!["reducible", "zero entropy"]);
        assert_eq!(s.require_standard(), Err(Error::ReducibleInput));
    }

    #[test]
    fn zero_matrix_rejected() {
        assert_eq!(EdgeShift::from_rows(vec![vec![0]]).unwrap_err(), Error::ZeroMatrix);
    }

    #[test]
    fn kronecker_edges_split() {
        let g = Arc::new(EdgeShift::from_rows(vec![vec![1, 1], vec![1, 0]]).unwrap());
        let p = kronecker_product(&g, &g);
        assert_eq!(p.num_edges(), 9);
        assert_eq!(p.matrix().entry_sum(), 9);
        for e in 0..9 {
            let (a, b) = p.split_edge(e).unwrap();
            assert_eq!(p.product_edge(a, b), Some(e));
            let pe = p.edge(e);
            assert_eq!(pe.source, g.source(a) * 2 + g.source(b));
            assert_eq!(pe.target, g.target(a) * 2 + g.target(b));
        }
        let f2 = Arc::new(EdgeShift::full(2).unwrap());
        let q = kronecker_product(&f2, &f2);
        assert_eq!(q.matrix().rows(), vec![vec![4]]);
        // row-major over pairs: (a, b) -> 2a + b
        assert_eq!(q.product_edge(1, 0), Some(2));
        let mixed = kronecker_product(&f2, &g);
        assert_eq!(mixed.matrix().rows(), vec![vec![2, 2], vec![2, 0]]);
    }

    #[test]
    fn transpose_bijection() {
        let s = EdgeShift::from_rows(vec![vec![0, 2], vec![1, 0]]).unwrap();
        let (t, bij) = transpose_shift(&s);
        assert_eq!(t.matrix().rows(), vec![vec![0, 1], vec![2, 0]]);
        for (e, &f) in bij.iter().enumerate() {
            assert_eq!(s.source(e as EdgeId), t.target(f));
            assert_eq!(s.target(e as EdgeId), t.source(f));
        }
        let (tt, bij2) = transpose_shift(&t);
        assert_eq!(tt.matrix(), s.matrix());
        for e in 0..s.num_edges() {
            assert_eq!(bij2[bij[e] as usize], e as EdgeId);
        }
    }

    #[test]
    fn symmetric_transpose_permutes_edges() {
        let b = EdgeShift::from_rows(vec![vec![2, 1], vec![1, 2]]).unwrap();
        let (t, bij) = transpose_shift(&b);
        assert_eq!(t.matrix(), b.matrix());
        assert_eq!(bij, vec![0, 1, 3, 2, 4, 5]);
    }
}
