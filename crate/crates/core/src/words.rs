//! Admissible words of a fixed length, ranked in lexicographic edge order.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::shift::{EdgeId, EdgeShift};

/// Default cap on the number of windows any single table may hold.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Checks that the number of admissible words of length `len` fits in
/// `budget` and returns it.
pub fn check_budget(shift: &EdgeShift, len: usize, budget: u64) -> Result<u64> {
    let count = shift.count_words(len);
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::WindowBudgetExceeded { needed: saturating_u128(&count), budget }),
    }
}

fn saturating_u128(x: &BigUint) -> u128 {
    x.to_u128().unwrap_or(u128::MAX)
}

#[derive(Debug)]
pub struct WordSpace {
    shift: Arc<EdgeShift>,
    len: usize,
    total: u64,
    // paths[l][s]: words of length l starting at state s
    paths: Vec<Vec<u64>>,
    // before[l][e]: words of length l+1 starting with an edge e' < e of the same source
    before: Vec<Vec<u64>>,
    // words of full length whose first edge leaves a smaller state
    state_offset: Vec<u64>,
}

impl WordSpace {
    pub fn new(shift: Arc<EdgeShift>, len: usize, budget: u64) -> Result<Self> {
        assert!(len >= 1, "word length must be positive");
        let total = check_budget(&shift, len, budget)?;
        let k = shift.num_states();
        let mut paths = vec![vec![1u64; k]];
        for l in 1..=len {
            let prev = &paths[l - 1];
            let row: Vec<u64> = (0..k).map(|s| shift.out_edges(s).iter().map(|&e| prev[shift.target(e)]).sum()).collect();
            paths.push(row);
        }
        let before = (0..len)
            .map(|l| {
                let mut b = vec![0u64; shift.num_edges()];
                for s in 0..k {
                    let mut acc = 0;
                    for &e in shift.out_edges(s) {
                        b[e as usize] = acc;
                        acc += paths[l][shift.target(e)];
                    }
                }
                b
            })
            .collect();
        let mut state_offset = Vec::with_capacity(k);
        let mut acc = 0;
        for s in 0..k {
            state_offset.push(acc);
            acc += paths[len][s];
        }
        Ok(Self { shift, len, total, paths, before, state_offset })
    }

    pub fn shift(&self) -> &Arc<EdgeShift> {
        &self.shift
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Rank of an admissible word; the caller guarantees admissibility.
    pub fn rank(&self, w: &[EdgeId]) -> u64 {
        debug_assert_eq!(w.len(), self.len);
        let mut r = self.state_offset[self.shift.source(w[0])];
        for (i, &e) in w.iter().enumerate() {
            r += self.before[self.len - 1 - i][e as usize];
        }
        r
    }

    pub fn rank_checked(&self, w: &[EdgeId]) -> Result<u64> {
        if w.len() != self.len {
            return Err(Error::WordTooShort { len: w.len(), window: self.len });
        }
        self.shift.check_word(w)?;
        Ok(self.rank(w))
    }

    pub fn unrank(&self, mut r: u64) -> Vec<EdgeId> {
        assert!(r < self.total);
        let k = self.shift.num_states();
        let mut state = (0..k).rev().find(|&s| self.state_offset[s] <= r).expect("rank in range");
        r -= self.state_offset[state];
        let mut w = Vec::with_capacity(self.len);
        for i in 0..self.len {
            let rem = self.len - 1 - i;
            let e = *self
                .shift
                .out_edges(state)
                .iter()
                .rev()
                .find(|&&e| self.before[rem][e as usize] <= r && self.paths[rem][self.shift.target(e)] > 0)
                .expect("rank in range");
            r -= self.before[rem][e as usize];
            w.push(e);
            state = self.shift.target(e);
        }
        w
    }

    /// Words of length `rem` that can follow state `s`.
    pub fn paths_from(&self, rem: usize, s: usize) -> u64 {
        self.paths[rem][s]
    }

    /// Visits every admissible word in rank order.
    pub fn for_each<F: FnMut(u64, &[EdgeId])>(&self, mut f: F) {
        let mut word: Vec<EdgeId> = Vec::with_capacity(self.len);
        let mut rank = 0u64;
        for s in 0..self.shift.num_states() {
            self.walk(s, &mut word, &mut rank, &mut f);
        }
    }

    fn walk<F: FnMut(u64, &[EdgeId])>(&self, s: usize, word: &mut Vec<EdgeId>, rank: &mut u64, f: &mut F) {
        if word.len() == self.len {
            f(*rank, word);
            *rank += 1;
            return;
        }
        let rem = self.len - word.len() - 1;
        for &e in self.shift.out_edges(s) {
            let t = self.shift.target(e);
            if self.paths[rem][t] == 0 {
                continue;
            }
            word.push(e);
            self.walk(t, word, rank, f);
            word.pop();
        }
    }

    pub fn words(&self) -> Vec<Vec<EdgeId>> {
        let mut out = Vec::with_capacity(self.total as usize);
        self.for_each(|_, w| out.push(w.to_vec()));
        out
    }
}

/// All admissible words of length `len`, in rank order.
pub fn admissible_words(shift: &EdgeShift, len: usize) -> Vec<Vec<EdgeId>> {
    let mut out: Vec<Vec<EdgeId>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            let edges: Vec<EdgeId> = match w.last() {
                None => (0..shift.num_edges() as EdgeId).collect(),
                Some(&e) => shift.out_edges(shift.target(e)).to_vec(),
            };
            for e in edges {
                let mut v = w.clone();
                v.push(e);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_follow_lexicographic_order() {
        let s = Arc::new(EdgeShift::from_rows(vec![vec![1, 1], vec![1, 0]]).unwrap());
        for len in 1..6 {
            let ws = WordSpace::new(s.clone(), len, DEFAULT_BUDGET).unwrap();
            let all = admissible_words(&s, len);
            assert_eq!(ws.total() as usize, all.len());
            assert_eq!(ws.words(), all);
            for (i, w) in all.iter().enumerate() {
                assert_eq!(ws.rank(w), i as u64);
                assert_eq!(&ws.unrank(i as u64), w);
            }
        }
    }

    #[test]
    fn dead_ends_are_skipped() {
        // state 1 has no out-edges
        let s = Arc::new(EdgeShift::from_rows(vec![vec![1, 1], vec![0, 0]]).unwrap());
        let ws = WordSpace::new(s.clone(), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(ws.words(), admissible_words(&s, 3));
        for (i, w) in ws.words().iter().enumerate() {
            assert_eq!(ws.rank(w), i as u64);
            assert_eq!(&ws.unrank(i as u64), w);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = Arc::new(EdgeShift::full(4).unwrap());
        assert!(matches!(WordSpace::new(s, 10, 1000), Err(Error::WindowBudgetExceeded { needed: 1_048_576, budget: 1000 })));
    }
}
