//! Entropy estimates for automorphisms: spacetime column counts, the
//! `C^φ(n)` word-collection count, invariant subsystems and exact values
//! for products of shift powers.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::code::{verify_automorphism, Automorphism, SlidingBlockCode};
use crate::coding_range::{as_shift_power, w_values_with_budget};
use crate::error::{Error, Result};
use crate::matrix::NonnegIntMatrix;
use crate::perron::{perron_data, DEFAULT_TOL};
use crate::shift::{EdgeId, EdgeShift};
use crate::words::{WordSpace, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMethod {
    Enumeration,
    ProductForm,
    Subsystem,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColumnCensus {
    pub w: usize,
    pub n: usize,
    pub count: u128,
    pub estimate: f64,
    pub certified: bool,
    pub method: CensusMethod,
}

/// Applies `code` `times` times to `word`, returning every iterate
/// (including the word itself); each application trims the window.
fn iterates(code: &SlidingBlockCode, word: &[EdgeId], times: usize) -> Vec<Vec<EdgeId>> {
    let mut out = Vec::with_capacity(times + 1);
    out.push(word.to_vec());
    for i in 0..times {
        let next = code.apply_unchecked(&out[i]);
        out.push(next);
    }
    out
}

/// Number of distinct spacetime columns `(φ^i(x)|[-w,w])_{0<=i<n}`.
pub fn column_census(auto: &Automorphism, w: usize, n: usize) -> Result<ColumnCensus> {
    column_census_with_budget(auto, w, n, DEFAULT_BUDGET)
}

pub fn column_census_with_budget(auto: &Automorphism, w: usize, n: usize, budget: u64) -> Result<ColumnCensus> {
    assert!(n >= 1, "census needs at least one step");
    if let Some((f, g)) = recognize_product_form(auto)? {
        let a = column_census_with_budget(&f, w, n, budget)?;
        let b = column_census_with_budget(&g, w, n, budget)?;
        let count = a.count * b.count;
        return Ok(ColumnCensus { w, n, count, estimate: (count as f64).ln() / n as f64, certified: false, method: CensusMethod::ProductForm });
    }
    let code = auto.forward();
    let (m, a) = (code.memory(), code.anticipation());
    let len = 2 * w + 1 + (n - 1) * (m + a);
    let space = WordSpace::new(auto.shift().clone(), len, budget)?;
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    space.for_each(|_, word| {
        let its = iterates(code, word, n - 1);
        let mut key = Vec::with_capacity(n * (2 * w + 1));
        for (i, it) in its.iter().enumerate() {
            // iterate i covers [-w-(n-1-i)M, w+(n-1-i)A] after trimming
            let off = (n - 1 - i) * m;
            key.extend_from_slice(&it[off..off + 2 * w + 1]);
        }
        seen.insert(key);
    });
    let count = seen.len() as u128;
    Ok(ColumnCensus { w, n, count, estimate: (count as f64).ln() / n as f64, certified: false, method: CensusMethod::Enumeration })
}

#[derive(Clone, Debug, Serialize)]
pub struct CPhiCount {
    pub n: usize,
    pub k: i64,
    pub r: usize,
    pub count: u128,
    /// `(1/n) log count`.
    pub rate: f64,
}

/// Number of distinct collections `{φ^i(y)_[k, k+2r+1] : 0 <= i <= n}` with
/// `k = -W^-(n, φ⁻¹)`; the count does not depend on `k` by shift invariance.
pub fn c_phi_count(auto: &Automorphism, n: usize) -> Result<CPhiCount> {
    c_phi_count_impl(auto, n, true, DEFAULT_BUDGET)
}

/// Ordered-tuple variant of [`c_phi_count`], for diagnostics.
pub fn c_phi_tuple_count(auto: &Automorphism, n: usize) -> Result<CPhiCount> {
    c_phi_count_impl(auto, n, false, DEFAULT_BUDGET)
}

fn c_phi_count_impl(auto: &Automorphism, n: usize, as_set: bool, budget: u64) -> Result<CPhiCount> {
    assert!(n >= 1);
    let code = auto.forward();
    let r = code.range();
    let k = -w_values_with_budget(auto, n as u32, budget)?.minus_inv;
    let (m, a) = (code.memory(), code.anticipation());
    let block = 2 * r + 2;
    let len = block + n * (m + a);
    let space = WordSpace::new(auto.shift().clone(), len, budget)?;
    let mut seen: HashSet<Vec<Vec<EdgeId>>> = HashSet::new();
    space.for_each(|_, word| {
        let its = iterates(code, word, n);
        let mut words: Vec<Vec<EdgeId>> = its
            .iter()
            .enumerate()
            .map(|(i, it)| {
                let off = (n - i) * m;
                it[off..off + block].to_vec()
            })
            .collect();
        if as_set {
            words.sort();
            words.dedup();
        }
        seen.insert(words);
    });
    let count = seen.len() as u128;
    Ok(CPhiCount { n, k, r, count, rate: (count as f64).ln() / n as f64 })
}

/// An edge subshift of an ambient shift, pruned to its essential part.
#[derive(Debug, Clone)]
pub struct Subsystem {
    pub shift: Arc<EdgeShift>,
    /// Ambient edge of each subsystem edge.
    pub to_ambient: Vec<EdgeId>,
    from_ambient: Vec<Option<EdgeId>>,
}

impl Subsystem {
    pub fn new(ambient: &EdgeShift, allowed: &[EdgeId]) -> Result<Self> {
        let mut keep = vec![false; ambient.num_edges()];
        for &e in allowed {
            ambient.check_edge(e)?;
            keep[e as usize] = true;
        }
        // drop edges until every state left has an allowed in- and out-edge
        let k = ambient.num_states();
        loop {
            let mut has_in = vec![false; k];
            let mut has_out = vec![false; k];
            for (i, e) in ambient.edges().iter().enumerate() {
                if keep[i] {
                    has_out[e.source] = true;
                    has_in[e.target] = true;
                }
            }
            let mut changed = false;
            for (i, e) in ambient.edges().iter().enumerate() {
                if keep[i] && !(has_in[e.source] && has_out[e.target]) {
                    keep[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut states: Vec<usize> = ambient.edges().iter().enumerate().filter(|(i, _)| keep[*i]).map(|(_, e)| e.source).collect();
        states.sort_unstable();
        states.dedup();
        if states.is_empty() {
            return Err(Error::EmptySubsystem);
        }
        let index = |s: usize| states.binary_search(&s).expect("kept state");
        let d = states.len();
        let mut rows = vec![vec![0u64; d]; d];
        let mut to_ambient = Vec::new();
        for (i, e) in ambient.edges().iter().enumerate() {
            if keep[i] {
                rows[index(e.source)][index(e.target)] += 1;
                to_ambient.push(i as EdgeId);
            }
        }
        let shift = EdgeShift::new(NonnegIntMatrix::new(rows)?);
        // edges are listed in (source, target, copy) order on both sides,
        // so the i-th kept edge is edge i of the subsystem
        let mut from_ambient = vec![None; ambient.num_edges()];
        for (new, &old) in to_ambient.iter().enumerate() {
            from_ambient[old as usize] = Some(new as EdgeId);
        }
        Ok(Self { shift: Arc::new(shift), to_ambient, from_ambient })
    }

    pub fn contains(&self, ambient_edge: EdgeId) -> bool {
        self.from_ambient.get(ambient_edge as usize).is_some_and(Option::is_some)
    }

    pub fn to_sub(&self, ambient_edge: EdgeId) -> Option<EdgeId> {
        self.from_ambient.get(ambient_edge as usize).copied().flatten()
    }

    /// Restriction of an endomorphism code; fails if some window inside the
    /// subsystem maps outside it.
    pub fn restrict_code(&self, code: &SlidingBlockCode) -> Result<SlidingBlockCode> {
        let to = self.to_ambient.clone();
        let from = self.from_ambient.clone();
        let code2 = code.clone();
        SlidingBlockCode::try_from_fn(self.shift.clone(), self.shift.clone(), code.memory(), code.anticipation(), move |w| {
            let amb: Vec<EdgeId> = w.iter().map(|&e| to[e as usize]).collect();
            let out = code2.rule(&amb);
            from[out as usize].ok_or(Error::NotInvariant { window: amb })
        })
    }
}

/// Restricts `auto` to the subshift on `allowed` edges, checking invariance
/// for both the forward and the inverse code.
pub fn restrict_to_subsystem(auto: &Automorphism, allowed: &[EdgeId]) -> Result<(Subsystem, Automorphism)> {
    let sub = Subsystem::new(auto.shift(), allowed)?;
    let f = sub.restrict_code(auto.forward())?;
    let g = sub.restrict_code(auto.inverse_code())?;
    let restricted = verify_automorphism(&f, &g)?;
    Ok((sub, restricted))
}

fn factor_code(shift: &EdgeShift, code: &SlidingBlockCode, left: bool) -> Result<Option<SlidingBlockCode>> {
    let fac = shift.factors().expect("checked by caller");
    let (this, other) = if left { (&fac.left, &fac.right) } else { (&fac.right, &fac.left) };
    let len = code.window();
    let filler = WordSpace::new(other.clone(), len, DEFAULT_BUDGET)?.unrank(0);
    let combine = |u: &[EdgeId]| -> Vec<EdgeId> {
        u.iter()
            .zip(&filler)
            .map(|(&x, &y)| if left { shift.product_edge(x, y) } else { shift.product_edge(y, x) }.expect("factor edges pair up"))
            .collect()
    };
    let pick = |e: EdgeId| {
        let (a, b) = shift.split_edge(e).expect("product edge");
        if left {
            a
        } else {
            b
        }
    };
    let candidate = SlidingBlockCode::from_fn(this.clone(), this.clone(), code.memory(), code.anticipation(), |u| pick(code.rule(&combine(u))));
    Ok(candidate.ok())
}

/// Splits an automorphism of a recorded Kronecker product into factor
/// automorphisms, when its rule acts on each coordinate separately.
pub fn recognize_product_form(auto: &Automorphism) -> Result<Option<(Automorphism, Automorphism)>> {
    let shift = auto.shift();
    if shift.factors().is_none() {
        return Ok(None);
    }
    let mut parts = Vec::new();
    for code in [auto.forward(), auto.inverse_code()] {
        let (Some(l), Some(r)) = (factor_code(shift, code, true)?, factor_code(shift, code, false)?) else {
            return Ok(None);
        };
        let mut splits = true;
        code.space().for_each(|rank, w| {
            if !splits {
                return;
            }
            let (ls, rs): (Vec<EdgeId>, Vec<EdgeId>) = w.iter().map(|&e| shift.split_edge(e).expect("product edge")).unzip();
            let want = shift.product_edge(l.rule(&ls), r.rule(&rs));
            splits = want == Some(code.table()[rank as usize]);
        });
        if !splits {
            return Ok(None);
        }
        parts.push((l, r));
    }
    let (fl, fr) = parts.remove(0);
    let (gl, gr) = parts.remove(0);
    match (verify_automorphism(&fl, &gl), verify_automorphism(&fr, &gr)) {
        (Ok(a), Ok(b)) => Ok(Some((a, b))),
        _ => Ok(None),
    }
}

/// `h_top(φ)` when it is exactly known: powers of the shift map and
/// products of such.
pub fn exact_entropy(auto: &Automorphism) -> Result<Option<f64>> {
    if let Some((f, g)) = recognize_product_form(auto)? {
        return Ok(match (exact_entropy(&f)?, exact_entropy(&g)?) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        });
    }
    let shift = auto.shift();
    let mut code = auto.forward().clone();
    for p in 1..=4i64 {
        if p > 1 {
            code = crate::code::compose(auto.forward(), &code)?;
        }
        if let Some(q) = as_shift_power(&code) {
            if q == 0 {
                return Ok(Some(0.0));
            }
            let h = perron_data(shift, DEFAULT_TOL)?.entropy;
            return Ok(Some(q.unsigned_abs() as f64 * h / p as f64));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsystemBound {
    pub edges: Vec<EdgeId>,
    pub entropy: Option<f64>,
    pub certified: bool,
    pub method: CensusMethod,
}

/// A lower bound for `h_top(φ)` from an invariant subsystem whose entropy is
/// exactly known.
pub fn subsystem_lower_bound(sub: &Subsystem, restricted: &Automorphism) -> Result<SubsystemBound> {
    let entropy = exact_entropy(restricted)?;
    Ok(SubsystemBound { edges: sub.to_ambient.clone(), entropy, certified: entropy.is_some(), method: CensusMethod::Subsystem })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn identity_census() {
        let id = builtins::identity(builtins::full_shift(2).unwrap());
        let c = column_census(&id, 1, 5).unwrap();
        assert_eq!(c.count, 8);
    }

    #[test]
    fn shift_census() {
        let s = builtins::shift_map(builtins::full_shift(2).unwrap()).unwrap();
        assert_eq!(column_census(&s, 1, 3).unwrap().count, 32);
    }

    #[test]
    fn product_census() {
        let (_, p) = builtins::sigma_x_sigma_inv().unwrap();
        let c = column_census(&p, 2, 6).unwrap();
        assert_eq!(c.method, CensusMethod::ProductForm);
        assert_eq!(c.count, 1 << 20);
        assert!(c.estimate >= 4f64.ln());
    }

    #[test]
    fn products_recognized() {
        let (_, tau) = builtins::tau_golden().unwrap();
        let (f, g) = recognize_product_form(&tau).unwrap().unwrap();
        assert!(f.forward().is_identity());
        assert_eq!(as_shift_power(g.forward()), Some(-1));
        let (_, swap) = builtins::vertex_swap_b().unwrap();
        assert!(recognize_product_form(&swap).unwrap().is_none());
        let (_, p) = builtins::sigma_x_sigma_inv().unwrap();
        assert!((exact_entropy(&p).unwrap().unwrap() - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_subsystem() {
        let s = builtins::shift_map(builtins::full_shift(2).unwrap()).unwrap();
        let (sub, r) = restrict_to_subsystem(&s, &[0]).unwrap();
        assert_eq!(sub.shift.num_edges(), 1);
        assert_eq!(exact_entropy(&r).unwrap(), Some(0.0));
    }

    #[test]
    fn c_phi_shift() {
        let s = builtins::shift_map(builtins::full_shift(2).unwrap()).unwrap();
        let c = c_phi_count(&s, 2).unwrap();
        // oracle: sets of the three length-4 subwords of each length-6 word
        let mut sets = HashSet::new();
        for x in 0..64u32 {
            let bits: Vec<u32> = (0..6).map(|i| (x >> (5 - i)) & 1).collect();
            let mut s: Vec<Vec<u32>> = (0..3).map(|i| bits[i..i + 4].to_vec()).collect();
            s.sort();
            s.dedup();
            sets.insert(s);
        }
        assert_eq!(c.count, sets.len() as u128);
        assert_eq!(c.k, -2);
    }
}
