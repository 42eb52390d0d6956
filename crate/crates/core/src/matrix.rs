//! Square matrices over the nonnegative integers and the combinatorial
//! graph facts (irreducibility, period, entropy sign) read off from them.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonzero square matrix with nonnegative integer entries.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct NonnegIntMatrix {
    size: usize,
    entries: Vec<u64>,
}

impl NonnegIntMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(size * size);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != size {
                return Err(Error::NotSquare { row, len: r.len(), expected: size });
            }
            entries.extend_from_slice(r);
        }
        if entries.iter().all(|&e| e == 0) {
            return Err(Error::ZeroMatrix);
        }
        Ok(Self { size, entries })
    }

    /// Accepts signed input (as read from JSON) and rejects negative entries.
    pub fn from_signed(rows: &[Vec<i64>]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, &v) in r.iter().enumerate() {
                if v < 0 {
                    return Err(Error::NegativeEntry { row: i, col: j });
                }
                row.push(v as u64);
            }
            out.push(row);
        }
        Self::new(out)
    }

    pub fn full_shift(symbols: u64) -> Result<Self> {
        Self::new(vec![vec![symbols]])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn entry_sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let k = self.size;
        let mut entries = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                entries[j * k + i] = self.get(i, j);
            }
        }
        Self { size: k, entries }
    }

    /// Kronecker product; state `(i, j)` of the product is `i * other.size() + j`.
    pub fn kronecker(&self, other: &Self) -> Self {
        let (p, q) = (self.size, other.size);
        let k = p * q;
        let mut entries = vec![0; k * k];
        for i1 in 0..p {
            for j1 in 0..q {
                for i2 in 0..p {
                    for j2 in 0..q {
                        entries[(i1 * q + j1) * k + (i2 * q + j2)] = self.get(i1, i2) * other.get(j1, j2);
                    }
                }
            }
        }
        Self { size: k, entries }
    }

    /// Entries as signed integers, for exact linear algebra.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        self.rows().into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect()
    }

    /// `1 A^n 1^T`, the number of paths with `n` edges; 1 for `n = 0`.
    pub fn path_count(&self, n: usize) -> BigUint {
        let k = self.size;
        let mut v: Vec<BigUint> = vec![BigUint::from(1u32); k];
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); k];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if a != 0 {
                        *slot += vj * a;
                    }
                }
            }
            v = next;
        }
        if n == 0 {
            return BigUint::from(1u32);
        }
        v.into_iter().sum()
    }

    /// Boolean adjacency: `adj[i][j]` iff `A[i][j] > 0`.
    pub fn support(&self) -> BoolMatrix {
        let k = self.size;
        let mut m = BoolMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j) > 0);
            }
        }
        m
    }

    /// Strongly connected components (Tarjan), each listed with sorted states.
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        let k = self.size;
        let mut index = vec![usize::MAX; k];
        let mut low = vec![0; k];
        let mut on_stack = vec![false; k];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for root in 0..k {
            if index[root] != usize::MAX {
                continue;
            }
            // iterative Tarjan: (node, next neighbour to inspect)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut next)) = call.last_mut() {
                if *next < k {
                    let w = *next;
                    *next += 1;
                    if self.get(v, w) == 0 {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    pub fn is_irreducible(&self) -> bool {
        let comps = self.strong_components();
        comps.len() == 1 && (self.size > 1 || self.get(0, 0) > 0)
    }

    /// Gcd of cycle lengths of an irreducible matrix, via BFS levels.
    pub fn period(&self) -> Option<usize> {
        if !self.is_irreducible() {
            return None;
        }
        let k = self.size;
        let mut level = vec![usize::MAX; k];
        level[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for w in 0..k {
                if self.get(v, w) > 0 && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut g = 0usize;
        for i in 0..k {
            for j in 0..k {
                if self.get(i, j) > 0 {
                    let d = (level[i] + 1).abs_diff(level[j]);
                    g = num_integer::gcd(g, d);
                }
            }
        }
        Some(g)
    }

    pub fn is_primitive(&self) -> bool {
        self.period() == Some(1)
    }

    /// Spectral radius > 1, decided combinatorially: some strong component
    /// carries more edges than it has states (a component with exactly as
    /// many edges as states is a single cycle, spectral radius 1).
    pub fn has_positive_entropy(&self) -> bool {
        self.strong_components().iter().any(|comp| {
            let edges: u64 = comp.iter().flat_map(|&i| comp.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j)).sum();
            let cyclic = comp.len() > 1 || self.get(comp[0], comp[0]) > 0;
            cyclic && edges > comp.len() as u64
        })
    }
}

impl TryFrom<Vec<Vec<u64>>> for NonnegIntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<u64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<NonnegIntMatrix> for Vec<Vec<u64>> {
    fn from(m: NonnegIntMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Debug for NonnegIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// Dense boolean matrix used for reachability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    size: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn zeros(size: usize) -> Self {
        Self { size, bits: vec![false; size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.size + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.size;
        let mut out = Self::zeros(k);
        for i in 0..k {
            for l in 0..k {
                if self.get(i, l) {
                    for j in 0..k {
                        if other.get(l, j) {
                            out.set(i, j, true);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut n: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.size);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> NonnegIntMatrix {
        NonnegIntMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(NonnegIntMatrix::new(vec![]), Err(Error::EmptyMatrix));
        assert!(matches!(NonnegIntMatrix::new(vec![vec![1, 0], vec![1]]), Err(Error::NotSquare { .. })));
        assert_eq!(NonnegIntMatrix::new(vec![vec![0, 0], vec![0, 0]]), Err(Error::ZeroMatrix));
        assert!(matches!(NonnegIntMatrix::from_signed(&[vec![1, -1], vec![0, 1]]), Err(Error::NegativeEntry { row: 0, col: 1 })));
    }

    #[test]
    fn graph_flags() {
        let golden = m(&[&[1, 1], &[1, 0]]);
        assert!(golden.is_irreducible() && golden.is_primitive() && golden.has_positive_entropy());
        let ident = m(&[&[1, 0], &[0, 1]]);
        assert!(!ident.is_irreducible());
        assert!(!ident.has_positive_entropy());
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert!(swap.is_irreducible() && !swap.is_primitive());
        assert_eq!(swap.period(), Some(2));
        assert!(!swap.has_positive_entropy());
        let periodic = m(&[&[0, 2], &[1, 0]]);
        assert_eq!(periodic.period(), Some(2));
        assert!(periodic.has_positive_entropy());
        let nil = m(&[&[0, 1], &[0, 0]]);
        assert!(!nil.is_irreducible() && !nil.has_positive_entropy());
    }

    #[test]
    fn kronecker_and_transpose() {
        let golden = m(&[&[1, 1], &[1, 0]]);
        let full2 = m(&[&[2]]);
        assert_eq!(full2.kronecker(&golden), m(&[&[2, 2], &[2, 0]]));
        assert_eq!(golden.kronecker(&golden).entry_sum(), 9);
        let a = m(&[&[0, 2], &[1, 0]]);
        assert_eq!(a.transpose(), m(&[&[0, 1], &[2, 0]]));
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn path_counts() {
        let golden = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(golden.path_count(0), BigUint::from(1u32));
        assert_eq!(golden.path_count(1), BigUint::from(3u32));
        assert_eq!(golden.path_count(2), BigUint::from(5u32));
        assert_eq!(m(&[&[2]]).path_count(3), BigUint::from(8u32));
    }
}
