//! Sliding block codes and certified automorphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::shift::{EdgeId, EdgeShift};
use crate::words::{WordSpace, DEFAULT_BUDGET};

/// A code with memory `m` and anticipation `a`: output coordinate `i` is
/// `rule(x[i-m ..= i+a])`. The rule table is indexed by word rank.
#[derive(Debug, Clone)]
pub struct SlidingBlockCode {
    source: Arc<EdgeShift>,
    target: Arc<EdgeShift>,
    memory: usize,
    anticipation: usize,
    space: Arc<WordSpace>,
    table: Arc<Vec<EdgeId>>,
}

impl SlidingBlockCode {
    /// Builds a code from a local rule, checking totality and composability.
    pub fn from_fn<F>(source: Arc<EdgeShift>, target: Arc<EdgeShift>, memory: usize, anticipation: usize, rule: F) -> Result<Self>
    where
        F: Fn(&[EdgeId]) -> EdgeId,
    {
        Self::try_from_fn(source, target, memory, anticipation, |w| Ok(rule(w)))
    }

    pub fn try_from_fn<F>(source: Arc<EdgeShift>, target: Arc<EdgeShift>, memory: usize, anticipation: usize, rule: F) -> Result<Self>
    where
        F: Fn(&[EdgeId]) -> Result<EdgeId>,
    {
        let space = Arc::new(WordSpace::new(source.clone(), memory + anticipation + 1, DEFAULT_BUDGET)?);
        let mut table = Vec::with_capacity(space.total() as usize);
        let mut err = None;
        space.for_each(|_, w| match rule(w) {
            Ok(e) => table.push(e),
            Err(e) => {
                err.get_or_insert(e);
                table.push(0);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        Self::from_table(source, target, memory, anticipation, space, table)
    }

    /// Builds a code from explicit `(window, output)` pairs, which must list
    /// every admissible window exactly once.
    pub fn from_pairs(
        source: Arc<EdgeShift>,
        target: Arc<EdgeShift>,
        memory: usize,
        anticipation: usize,
        pairs: &[(Vec<EdgeId>, EdgeId)],
    ) -> Result<Self> {
        let space = Arc::new(WordSpace::new(source.clone(), memory + anticipation + 1, DEFAULT_BUDGET)?);
        let mut table: Vec<Option<EdgeId>> = vec![None; space.total() as usize];
        for (w, out) in pairs {
            let r = space
                .rank_checked(w)
                .map_err(|e| Error::BadRuleTable(format!("window {w:?}: {e}")))?;
            if table[r as usize].replace(*out).is_some() {
                return Err(Error::BadRuleTable(format!("window {w:?} listed twice")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(r, o)| o.ok_or_else(|| Error::BadRuleTable(format!("window {:?} has no image", space.unrank(r as u64)))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(source, target, memory, anticipation, space, table)
    }

    fn from_table(
        source: Arc<EdgeShift>,
        target: Arc<EdgeShift>,
        memory: usize,
        anticipation: usize,
        space: Arc<WordSpace>,
        table: Vec<EdgeId>,
    ) -> Result<Self> {
        for &e in &table {
            target.check_edge(e)?;
        }
        let code = Self { source, target, memory, anticipation, space, table: Arc::new(table) };
        code.check_composable()?;
        Ok(code)
    }

    fn check_composable(&self) -> Result<()> {
        let window = self.window();
        let longer = WordSpace::new(self.source.clone(), window + 1, DEFAULT_BUDGET)?;
        let mut bad = None;
        longer.for_each(|_, w| {
            if bad.is_some() {
                return;
            }
            let left = self.rule(&w[..window]);
            let right = self.rule(&w[1..]);
            if self.target.target(left) != self.target.source(right) {
                bad = Some(w.to_vec());
            }
        });
        match bad {
            Some(window) => Err(Error::NotComposable { window }),
            None => Ok(()),
        }
    }

    pub fn identity(shift: Arc<EdgeShift>) -> Self {
        let table: Vec<EdgeId> = (0..shift.num_edges() as EdgeId).collect();
        let space = Arc::new(WordSpace::new(shift.clone(), 1, DEFAULT_BUDGET).expect("single edges fit any budget"));
        Self { source: shift.clone(), target: shift, memory: 0, anticipation: 0, space, table: Arc::new(table) }
    }

    pub fn source(&self) -> &Arc<EdgeShift> {
        &self.source
    }

    pub fn target(&self) -> &Arc<EdgeShift> {
        &self.target
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    /// `max(m, a)`.
    pub fn range(&self) -> usize {
        self.memory.max(self.anticipation)
    }

    pub fn window(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    pub fn space(&self) -> &WordSpace {
        &self.space
    }

    pub fn table(&self) -> &[EdgeId] {
        &self.table
    }

    /// Image of an admissible window (unchecked).
    pub fn rule(&self, w: &[EdgeId]) -> EdgeId {
        self.table[self.space.rank(w) as usize]
    }

    pub fn rule_checked(&self, w: &[EdgeId]) -> Result<EdgeId> {
        Ok(self.table[self.space.rank_checked(w)? as usize])
    }

    /// Output position `i` is the image of input window `[i, i+m+a]`.
    pub fn apply_to_word(&self, w: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let window = self.window();
        if w.len() < window {
            return Err(Error::WordTooShort { len: w.len(), window });
        }
        self.source.check_word(w)?;
        Ok(self.apply_unchecked(w))
    }

    pub fn apply_unchecked(&self, w: &[EdgeId]) -> Vec<EdgeId> {
        w.windows(self.window()).map(|x| self.rule(x)).collect()
    }

    /// Pairs `(window, output)` in rank order.
    pub fn pairs(&self) -> Vec<(Vec<EdgeId>, EdgeId)> {
        let mut out = Vec::with_capacity(self.table.len());
        self.space.for_each(|r, w| out.push((w.to_vec(), self.table[r as usize])));
        out
    }

    /// True when both codes induce the same map on points.
    pub fn same_map(&self, other: &Self) -> bool {
        if !self.source.same_shift(&other.source) || !self.target.same_shift(&other.target) {
            return false;
        }
        let m = self.memory.max(other.memory);
        let a = self.anticipation.max(other.anticipation);
        let Ok(space) = WordSpace::new(self.source.clone(), m + a + 1, DEFAULT_BUDGET) else {
            return false;
        };
        let mut same = true;
        space.for_each(|_, w| {
            if same {
                let x = self.rule(&w[m - self.memory..m + self.anticipation + 1]);
                let y = other.rule(&w[m - other.memory..m + other.anticipation + 1]);
                same = x == y;
            }
        });
        same
    }

    /// True when the code is the identity map on points.
    pub fn is_identity(&self) -> bool {
        self.source.same_shift(&self.target) && self.pairs().iter().all(|(w, o)| w[self.memory] == *o)
    }
}

/// `outer ∘ inner`, materialized on the combined window.
pub fn compose(outer: &SlidingBlockCode, inner: &SlidingBlockCode) -> Result<SlidingBlockCode> {
    compose_with_budget(outer, inner, DEFAULT_BUDGET)
}

pub fn compose_with_budget(outer: &SlidingBlockCode, inner: &SlidingBlockCode, budget: u64) -> Result<SlidingBlockCode> {
    if !inner.target.same_shift(&outer.source) {
        return Err(Error::ShiftMismatch);
    }
    let memory = outer.memory + inner.memory;
    let anticipation = outer.anticipation + inner.anticipation;
    let space = Arc::new(WordSpace::new(inner.source.clone(), memory + anticipation + 1, budget)?);
    let mut table = Vec::with_capacity(space.total() as usize);
    let mut mid = vec![0; outer.window()];
    space.for_each(|_, w| {
        for (i, slot) in mid.iter_mut().enumerate() {
            *slot = inner.rule(&w[i..i + inner.window()]);
        }
        table.push(outer.rule(&mid));
    });
    Ok(SlidingBlockCode {
        source: inner.source.clone(),
        target: outer.target.clone(),
        memory,
        anticipation,
        space,
        table: Arc::new(table),
    })
}

/// How an automorphism's inverse was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Both compositions were checked window by window.
    Checked { windows_forward: u64, windows_backward: u64 },
    /// A power of a certified automorphism.
    Power { exponent: i64 },
}

#[derive(Debug, Clone)]
pub struct Automorphism {
    forward: SlidingBlockCode,
    inverse: SlidingBlockCode,
    certificate: Certificate,
}

fn check_identity(code: &SlidingBlockCode, side: &'static str) -> Result<u64> {
    let mut bad = None;
    code.space.for_each(|r, w| {
        let got = code.table[r as usize];
        if bad.is_none() && got != w[code.memory] {
            bad = Some(Error::NotInverse { side, window: w.to_vec(), got, expected: w[code.memory] });
        }
    });
    match bad {
        Some(e) => Err(e),
        None => Ok(code.space.total()),
    }
}

/// Certifies that `f` and `g` are mutually inverse.
pub fn verify_automorphism(f: &SlidingBlockCode, g: &SlidingBlockCode) -> Result<Automorphism> {
    let shift = f.source();
    if !f.target.same_shift(shift) || !g.source.same_shift(shift) || !g.target.same_shift(shift) {
        return Err(Error::ShiftMismatch);
    }
    let windows_forward = check_identity(&compose(g, f)?, "inverse after forward")?;
    let windows_backward = check_identity(&compose(f, g)?, "forward after inverse")?;
    Ok(Automorphism {
        forward: f.clone(),
        inverse: g.clone(),
        certificate: Certificate::Checked { windows_forward, windows_backward },
    })
}

/// Searches for an inverse with symmetric window radius `R = 0..=r_max`.
///
/// Failure means either that the code is not invertible or that its
/// inverse needs a larger radius; the two cases are not distinguished.
pub fn infer_inverse(code: &SlidingBlockCode, r_max: usize) -> Result<SlidingBlockCode> {
    if !code.source.same_shift(&code.target) {
        return Err(Error::ShiftMismatch);
    }
    for radius in 0..=r_max {
        if let Some(inv) = inverse_with_radius(code, radius)? {
            if verify_automorphism(code, &inv).is_ok() {
                return Ok(inv);
            }
        }
    }
    Err(Error::NotInvertibleWithin(r_max))
}

fn inverse_with_radius(code: &SlidingBlockCode, radius: usize) -> Result<Option<SlidingBlockCode>> {
    let out_len = 2 * radius + 1;
    let input = WordSpace::new(code.source.clone(), out_len + code.memory + code.anticipation, DEFAULT_BUDGET)?;
    let output = Arc::new(WordSpace::new(code.target.clone(), out_len, DEFAULT_BUDGET)?);
    let mut table: Vec<Option<EdgeId>> = vec![None; output.total() as usize];
    let center = code.memory + radius;
    let mut ambiguous = false;
    input.for_each(|_, w| {
        if ambiguous {
            return;
        }
        let out = code.apply_unchecked(w);
        let slot = &mut table[output.rank(&out) as usize];
        match slot {
            None => *slot = Some(w[center]),
            Some(prev) if *prev != w[center] => ambiguous = true,
            _ => {}
        }
    });
    if ambiguous || table.iter().any(Option::is_none) {
        return Ok(None);
    }
    let table = table.into_iter().map(Option::unwrap).collect();
    let inv = SlidingBlockCode {
        source: code.target.clone(),
        target: code.source.clone(),
        memory: radius,
        anticipation: radius,
        space: output,
        table: Arc::new(table),
    };
    Ok(inv.check_composable().is_ok().then_some(inv))
}

impl Automorphism {
    pub fn identity(shift: Arc<EdgeShift>) -> Self {
        let id = SlidingBlockCode::identity(shift);
        verify_automorphism(&id, &id).expect("identity is its own inverse")
    }

    pub fn shift(&self) -> &Arc<EdgeShift> {
        self.forward.source()
    }

    pub fn forward(&self) -> &SlidingBlockCode {
        &self.forward
    }

    pub fn inverse_code(&self) -> &SlidingBlockCode {
        &self.inverse
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn inverse(&self) -> Self {
        let certificate = match self.certificate {
            Certificate::Checked { windows_forward, windows_backward } => {
                Certificate::Checked { windows_forward: windows_backward, windows_backward: windows_forward }
            }
            Certificate::Power { exponent } => Certificate::Power { exponent: -exponent },
        };
        Self { forward: self.inverse.clone(), inverse: self.forward.clone(), certificate }
    }

    /// `φⁿ` as a single code; `n = 0` gives the identity code.
    pub fn power(&self, n: i64) -> Result<SlidingBlockCode> {
        self.power_with_budget(n, DEFAULT_BUDGET)
    }

    pub fn power_with_budget(&self, n: i64, budget: u64) -> Result<SlidingBlockCode> {
        let base = if n >= 0 { &self.forward } else { &self.inverse };
        let mut acc = SlidingBlockCode::identity(self.shift().clone());
        for i in 0..n.unsigned_abs() {
            acc = if i == 0 { base.clone() } else { compose_with_budget(base, &acc, budget)? };
        }
        Ok(acc)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        self.pow_with_budget(n, DEFAULT_BUDGET)
    }

    pub fn pow_with_budget(&self, n: i64, budget: u64) -> Result<Self> {
        Ok(Self {
            forward: self.power_with_budget(n, budget)?,
            inverse: self.power_with_budget(-n, budget)?,
            certificate: Certificate::Power { exponent: n },
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        verify_automorphism(&compose(&self.forward, &other.forward)?, &compose(&other.inverse, &self.inverse)?)
    }

    pub fn same_map(&self, other: &Self) -> bool {
        self.forward.same_map(&other.forward)
    }
}

/// Rule table keyed by window, for serialization.
pub fn rule_map(code: &SlidingBlockCode) -> BTreeMap<Vec<EdgeId>, EdgeId> {
    code.pairs().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full2() -> Arc<EdgeShift> {
        Arc::new(EdgeShift::full(2).unwrap())
    }

    fn shift_code(s: &Arc<EdgeShift>) -> SlidingBlockCode {
        SlidingBlockCode::from_fn(s.clone(), s.clone(), 0, 1, |w| w[1]).unwrap()
    }

    fn inverse_shift_code(s: &Arc<EdgeShift>) -> SlidingBlockCode {
        SlidingBlockCode::from_fn(s.clone(), s.clone(), 1, 0, |w| w[0]).unwrap()
    }

    #[test]
    fn apply_shift() {
        let s = full2();
        assert_eq!(shift_code(&s).apply_to_word(&[0, 1, 1, 0]).unwrap(), vec![1, 1, 0]);
        assert!(matches!(shift_code(&s).apply_to_word(&[0]), Err(Error::WordTooShort { len: 1, window: 2 })));
    }

    #[test]
    fn compose_shifts() {
        let s = full2();
        let sh = shift_code(&s);
        let two = compose(&sh, &sh).unwrap();
        assert_eq!((two.memory(), two.anticipation()), (0, 2));
        assert_eq!(two.apply_to_word(&[0, 1, 1, 0, 1]).unwrap(), vec![1, 0, 1]);
        let id = SlidingBlockCode::identity(s.clone());
        let same = compose(&id, &sh).unwrap();
        assert_eq!(same.table(), sh.table());
    }

    #[test]
    fn certification() {
        let s = full2();
        let a = verify_automorphism(&shift_code(&s), &inverse_shift_code(&s)).unwrap();
        assert!(matches!(a.certificate(), Certificate::Checked { .. }));
        let err = verify_automorphism(&shift_code(&s), &shift_code(&s)).unwrap_err();
        assert!(matches!(err, Error::NotInverse { .. }));
    }

    #[test]
    fn inverse_inference() {
        let s = full2();
        let inv = infer_inverse(&shift_code(&s), 1).unwrap();
        assert!(inv.same_map(&inverse_shift_code(&s)));
        let xor = SlidingBlockCode::from_fn(s.clone(), s.clone(), 0, 1, |w| w[0] ^ w[1]).unwrap();
        assert_eq!(infer_inverse(&xor, 2).unwrap_err(), Error::NotInvertibleWithin(2));
    }

    #[test]
    fn non_composable_rule_rejected() {
        let g = Arc::new(EdgeShift::from_rows(vec![vec![1, 1], vec![1, 0]]).unwrap());
        // sends every edge to edge 2 (1 -> 0), which cannot follow itself
        let err = SlidingBlockCode::from_fn(g.clone(), g, 0, 0, |_| 2).unwrap_err();
        assert!(matches!(err, Error::NotComposable { .. }));
    }

    #[test]
    fn powers() {
        let s = full2();
        let a = verify_automorphism(&shift_code(&s), &inverse_shift_code(&s)).unwrap();
        let p3 = a.power(3).unwrap();
        assert_eq!((p3.memory(), p3.anticipation()), (0, 3));
        assert_eq!(p3.apply_to_word(&[0, 0, 0, 1, 1]).unwrap(), vec![1, 1]);
        assert!(a.power(0).unwrap().is_identity());
        assert!(a.power(-1).unwrap().same_map(&inverse_shift_code(&s)));
    }
}
