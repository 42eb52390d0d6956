//! Coding ranges `W^±(n, φ)` and certified bounds on the exponents `α^±(φ)`.
//!
//! `coded_minus(code, j)` asks whether output coordinate `j` is a function of
//! the input on `(-∞, 0]`; `coded_plus` is the mirror question for `[0, ∞)`.
//! Both reduce to questions about the code's window `[j-M, j+A']`:
//!
//! * a window overlapping the known half-line splits into a known part and
//!   a free part, and the output must be constant on each class of windows
//!   with a common known part;
//! * a window disjoint from it is separated by `g` free edges. Two points
//!   sharing the known half-line pass through a common state `q` and then
//!   walk `g` steps independently, so the pair of window start states ranges
//!   over `S_q × S_q` with `S_q` the states `g` steps from `q`. The output
//!   must be constant on all windows starting in `S_q`.
//!
//! Words are assumed to extend to bi-infinite points, which holds on the
//! essential graphs (irreducible matrices) this module is used with.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::code::{verify_automorphism, Automorphism, SlidingBlockCode};
use crate::error::{Error, Result};
use crate::matrix::BoolMatrix;
use crate::rational::{q_to_string, Q};
use crate::shift::{transpose_shift, EdgeId, EdgeShift};
use crate::words::{WordSpace, DEFAULT_BUDGET};

fn step_matrix(shift: &EdgeShift) -> BoolMatrix {
    let k = shift.num_states();
    let mut m = BoolMatrix::zeros(k);
    for e in shift.edges() {
        m.set(e.source, e.target, true);
    }
    m
}

/// Output coordinate `j` of `code` is determined by input on `(-∞, 0]`.
pub fn coded_minus(code: &SlidingBlockCode, j: i64) -> bool {
    let (m, a) = (code.memory() as i64, code.anticipation() as i64);
    if j + a <= 0 {
        return true;
    }
    let space = code.space();
    let table = code.table();
    if j - m <= 0 {
        // the first `known` window entries sit at coordinates <= 0
        let known = (1 - (j - m)) as usize;
        let mut prev: Option<(Vec<EdgeId>, EdgeId)> = None;
        let mut ok = true;
        space.for_each(|r, w| {
            if !ok {
                return;
            }
            let out = table[r as usize];
            match &mut prev {
                Some((p, o)) if p[..] == w[..known] => ok = *o == out,
                _ => prev = Some((w[..known].to_vec(), out)),
            }
        });
        return ok;
    }
    let gap = (j - m - 1) as usize;
    let shift = code.source();
    let by_start = outputs_by_state(code, |w| shift.source(w[0]));
    let reach = step_matrix(shift).pow(gap);
    let k = shift.num_states();
    (0..k)
        .filter(|&q| !shift.in_edges(q).is_empty())
        .all(|q| constant_over(&by_start, (0..k).filter(|&s| reach.get(q, s))))
}

/// Output coordinate `j` of `code` is determined by input on `[0, ∞)`.
pub fn coded_plus(code: &SlidingBlockCode, j: i64) -> bool {
    let (m, a) = (code.memory() as i64, code.anticipation() as i64);
    if j - m >= 0 {
        return true;
    }
    let shift = code.source();
    let table = code.table();
    if j + a >= 0 {
        // the last `known` window entries sit at coordinates >= 0
        let known = (j + a + 1) as usize;
        let window = code.window();
        let suffixes = match WordSpace::new(shift.clone(), known, u64::MAX) {
            Ok(s) => s,
            Err(_) => return false,
        };
        let mut seen: Vec<Option<EdgeId>> = vec![None; suffixes.total() as usize];
        let mut ok = true;
        code.space().for_each(|r, w| {
            if !ok {
                return;
            }
            let out = table[r as usize];
            let slot = &mut seen[suffixes.rank(&w[window - known..]) as usize];
            match slot {
                Some(o) => ok = *o == out,
                None => *slot = Some(out),
            }
        });
        return ok;
    }
    let gap = (-1 - (j + a)) as usize;
    let by_end = outputs_by_state(code, |w| shift.target(w[w.len() - 1]));
    let reach = step_matrix(shift).pow(gap);
    let k = shift.num_states();
    (0..k)
        .filter(|&p| !shift.out_edges(p).is_empty())
        .all(|p| constant_over(&by_end, (0..k).filter(|&s| reach.get(s, p))))
}

fn outputs_by_state<F: Fn(&[EdgeId]) -> usize>(code: &SlidingBlockCode, key: F) -> Vec<BTreeSet<EdgeId>> {
    let mut sets = vec![BTreeSet::new(); code.source().num_states()];
    let table = code.table();
    code.space().for_each(|r, w| {
        sets[key(w)].insert(table[r as usize]);
    });
    sets
}

fn constant_over(sets: &[BTreeSet<EdgeId>], states: impl Iterator<Item = usize>) -> bool {
    let mut value = None;
    for s in states {
        for &o in &sets[s] {
            match value {
                None => value = Some(o),
                Some(v) if v != o => return false,
                _ => {}
            }
        }
    }
    true
}

/// Reference implementations by enumerating pairs of words.
pub mod naive {
    use super::*;
    use crate::words::admissible_words;
    use std::collections::HashMap;

    fn output_at(code: &SlidingBlockCode, word: &[EdgeId], lo: i64, j: i64) -> EdgeId {
        let start = (j - code.memory() as i64 - lo) as usize;
        code.rule(&word[start..start + code.window()])
    }

    /// Compares all pairs of words on `[min(j-M, 0), max(j+A', 0)]` that
    /// agree at coordinates `<= 0` (pairs are grouped by their common part).
    pub fn coded_minus(code: &SlidingBlockCode, j: i64) -> bool {
        let lo = (j - code.memory() as i64).min(0);
        let hi = (j + code.anticipation() as i64).max(0);
        let known = (1 - lo) as usize;
        agree(code, lo, hi, j, |w| &w[..known])
    }

    pub fn coded_plus(code: &SlidingBlockCode, j: i64) -> bool {
        let lo = (j - code.memory() as i64).min(0);
        let hi = (j + code.anticipation() as i64).max(0);
        let from = (-lo) as usize;
        agree(code, lo, hi, j, |w| &w[from..])
    }

    fn agree<F: Fn(&[EdgeId]) -> &[EdgeId]>(code: &SlidingBlockCode, lo: i64, hi: i64, j: i64, part: F) -> bool {
        let words = admissible_words(code.source(), (hi - lo + 1) as usize);
        let mut first: HashMap<&[EdgeId], EdgeId> = HashMap::new();
        words.iter().all(|x| {
            let out = output_at(code, x, lo, j);
            *first.entry(part(x)).or_insert(out) == out
        })
    }
}

fn sup_minus(code: &SlidingBlockCode, ceiling: i64) -> Result<i64> {
    let start = 1 - code.anticipation() as i64;
    for j in start..=ceiling + 1 {
        if !coded_minus(code, j) {
            return Ok(j - 1);
        }
    }
    Err(Error::InternalInvariantViolation(format!(
        "every coordinate up to {} is coded by the left half-line",
        ceiling + 1
    )))
}

fn inf_plus(code: &SlidingBlockCode, floor: i64) -> Result<i64> {
    let start = code.memory() as i64 - 1;
    for j in (floor - 1..=start).rev() {
        if !coded_plus(code, j) {
            return Ok(j + 1);
        }
    }
    Err(Error::InternalInvariantViolation(format!(
        "every coordinate down to {} is coded by the right half-line",
        floor - 1
    )))
}

/// `W^±(n, φ)` and `W^±(n, φ⁻¹)` for one `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WValues {
    pub n: u32,
    pub minus: i64,
    pub plus: i64,
    pub minus_inv: i64,
    pub plus_inv: i64,
}

/// Computes the coding ranges from the codes of `φⁿ` and `φ⁻ⁿ`.
///
/// The `φ⁻ⁿ` side is scanned first, bounded by the windows of `φⁿ`; its
/// values then bound the `φⁿ` side through the sum inequalities.
pub fn w_values_from_codes(n: u32, fwd: &SlidingBlockCode, inv: &SlidingBlockCode) -> Result<WValues> {
    let minus_inv = sup_minus(inv, fwd.anticipation() as i64)?;
    let plus_inv = inf_plus(inv, -(fwd.memory() as i64))?;
    let minus = sup_minus(fwd, -minus_inv)?;
    let plus = inf_plus(fwd, -plus_inv)?;
    Ok(WValues { n, minus, plus, minus_inv, plus_inv })
}

pub fn w_values(auto: &Automorphism, n: u32) -> Result<WValues> {
    w_values_with_budget(auto, n, DEFAULT_BUDGET)
}

pub fn w_values_with_budget(auto: &Automorphism, n: u32, budget: u64) -> Result<WValues> {
    let fwd = auto.power_with_budget(n as i64, budget)?;
    let inv = auto.power_with_budget(-(n as i64), budget)?;
    w_values_from_codes(n, &fwd, &inv)
}

#[derive(Clone, Debug, Serialize)]
pub struct CodingRangeProfile {
    pub name: String,
    pub n_max: u32,
    pub w_minus: Vec<i64>,
    pub w_plus: Vec<i64>,
    pub w_minus_inv: Vec<i64>,
    pub w_plus_inv: Vec<i64>,
    pub a_minus: Vec<i64>,
    pub a_plus: Vec<i64>,
    /// `n` for which `φⁿ` equals a power of the shift map, if any was found.
    #[serde(skip)]
    pub shift_power: Option<(u32, i64)>,
}

impl CodingRangeProfile {
    pub fn values(&self, n: u32) -> WValues {
        let i = n as usize - 1;
        WValues { n, minus: self.w_minus[i], plus: self.w_plus[i], minus_inv: self.w_minus_inv[i], plus_inv: self.w_plus_inv[i] }
    }

    /// Sum inequalities, non-negativity of `A^±`, super/subadditivity.
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.n_max as usize {
            let n = i + 1;
            if self.w_minus[i] + self.w_minus_inv[i] > 0 {
                out.push(format!("W-({n},f) + W-({n},f^-1) > 0"));
            }
            if self.w_plus[i] + self.w_plus_inv[i] < 0 {
                out.push(format!("W+({n},f) + W+({n},f^-1) < 0"));
            }
            if self.a_minus[i] < 0 || self.a_plus[i] < 0 {
                out.push(format!("A-/A+ negative at n={n}"));
            }
        }
        let seqs: [(&str, &Vec<i64>, bool); 4] = [
            ("W-(f)", &self.w_minus, true),
            ("W-(f^-1)", &self.w_minus_inv, true),
            ("W+(f)", &self.w_plus, false),
            ("W+(f^-1)", &self.w_plus_inv, false),
        ];
        for (name, s, superadditive) in seqs {
            for p in 1..=s.len() {
                for q in 1..=s.len() - p {
                    let (lhs, rhs) = (s[p + q - 1], s[p - 1] + s[q - 1]);
                    if (superadditive && lhs < rhs) || (!superadditive && lhs > rhs) {
                        out.push(format!("{name} fails {} at ({p},{q})", if superadditive { "superadditivity" } else { "subadditivity" }));
                    }
                }
            }
        }
        out
    }
}

/// `q` with `φ = σ^q` as maps, if the code is a pure shift.
pub fn as_shift_power(code: &SlidingBlockCode) -> Option<i64> {
    let m = code.memory();
    (0..code.window()).find_map(|pos| {
        let ok = code.pairs().iter().all(|(w, o)| w[pos] == *o);
        ok.then_some(pos as i64 - m as i64)
    })
}

pub fn coding_range_profile(name: &str, auto: &Automorphism, n_max: u32, budget: u64) -> Result<CodingRangeProfile> {
    let mut p = CodingRangeProfile {
        name: name.to_string(),
        n_max,
        w_minus: vec![],
        w_plus: vec![],
        w_minus_inv: vec![],
        w_plus_inv: vec![],
        a_minus: vec![],
        a_plus: vec![],
        shift_power: None,
    };
    let mut fwd = auto.forward().clone();
    let mut inv = auto.inverse_code().clone();
    for n in 1..=n_max {
        if n > 1 {
            fwd = crate::code::compose_with_budget(auto.forward(), &fwd, budget)?;
            inv = crate::code::compose_with_budget(auto.inverse_code(), &inv, budget)?;
        }
        if p.shift_power.is_none() {
            if let Some(q) = as_shift_power(&fwd) {
                p.shift_power = Some((n, q));
            }
        }
        let v = w_values_from_codes(n, &fwd, &inv)?;
        p.w_minus.push(v.minus);
        p.w_plus.push(v.plus);
        p.w_minus_inv.push(v.minus_inv);
        p.w_plus_inv.push(v.plus_inv);
        p.a_minus.push(v.minus_inv.abs() - v.minus);
        p.a_plus.push(v.minus.abs() - v.minus_inv);
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn point(x: Q) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= Q::zero() && Q::zero() <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn neg(&self) -> Self {
        Self { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn abs(&self) -> Self {
        if self.lo >= Q::zero() {
            self.clone()
        } else if self.hi <= Q::zero() {
            self.neg()
        } else {
            Self { lo: Q::zero(), hi: self.hi.clone().max(-self.lo.clone()) }
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Interval", 2)?;
        st.serialize_field("lo", &q_to_string(&self.lo))?;
        st.serialize_field("hi", &q_to_string(&self.hi))?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distortion {
    CertifiedNotDistorted,
    ConsistentWithDistortion,
}

/// How the exponent interval was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentMethod {
    /// Fekete bounds from the computed `W` values and the sum inequalities.
    Subadditive,
    /// Some power `φ^p` is the shift power `σ^q`, so the exponents are `-q/p`.
    ShiftPower,
    /// The automorphism is a recognized product and the factors' exponents are exact.
    Product,
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovBounds {
    pub alpha_minus: Interval,
    pub alpha_plus: Interval,
    pub alpha_minus_inv: Interval,
    pub alpha_plus_inv: Interval,
    pub n_max: u32,
    pub method: ExponentMethod,
    pub distortion: Distortion,
    pub distortion_inv: Distortion,
}

fn ratio(num: i64, n: usize) -> Q {
    Q::new(BigInt::from(num), BigInt::from(n as i64))
}

fn max_ratio(seq: &[i64], sign: i64) -> Q {
    seq.iter().enumerate().map(|(i, &w)| ratio(sign * w, i + 1)).max().expect("n_max >= 1")
}

fn min_ratio(seq: &[i64], sign: i64) -> Q {
    seq.iter().enumerate().map(|(i, &w)| ratio(sign * w, i + 1)).min().expect("n_max >= 1")
}

fn verdict(a: &Interval, b: &Interval) -> Distortion {
    if a.contains_zero() && b.contains_zero() {
        Distortion::ConsistentWithDistortion
    } else {
        Distortion::CertifiedNotDistorted
    }
}

/// Exact exponents `(α^-(φ), α^+(φ), α^-(φ⁻¹), α^+(φ⁻¹))`.
type Exact = (Q, Q, Q, Q);

fn exact_from_shift_power(profile: &CodingRangeProfile) -> Option<Exact> {
    let (p, q) = profile.shift_power?;
    let a = Q::new(BigInt::from(-q), BigInt::from(p));
    Some((a.clone(), a.clone(), -a.clone(), -a))
}

fn exact_exponents(auto: &Automorphism, n_max: u32, budget: u64, depth: u32) -> Result<Option<(Exact, ExponentMethod)>> {
    let profile = coding_range_profile("", auto, n_max, budget)?;
    if let Some(e) = exact_from_shift_power(&profile) {
        return Ok(Some((e, ExponentMethod::ShiftPower)));
    }
    if depth > 0 {
        if let Some((f, g)) = crate::entropy::recognize_product_form(auto)? {
            let ef = exact_exponents(&f, n_max, budget, depth - 1)?;
            let eg = exact_exponents(&g, n_max, budget, depth - 1)?;
            if let (Some((a, _)), Some((b, _))) = (ef, eg) {
                // independent tracks: coded sets intersect
                let e = (
                    a.0.clone().min(b.0.clone()),
                    a.1.clone().max(b.1.clone()),
                    a.2.clone().min(b.2.clone()),
                    a.3.clone().max(b.3.clone()),
                );
                return Ok(Some((e, ExponentMethod::Product)));
            }
        }
    }
    Ok(None)
}

pub fn lyapunov_bounds(auto: &Automorphism, n_max: u32) -> Result<LyapunovBounds> {
    lyapunov_bounds_with_budget(auto, n_max, DEFAULT_BUDGET)
}

pub fn lyapunov_bounds_with_budget(auto: &Automorphism, n_max: u32, budget: u64) -> Result<LyapunovBounds> {
    let profile = coding_range_profile("", auto, n_max, budget)?;
    lyapunov_bounds_from_profile(auto, &profile, budget)
}

/// Fekete intervals from the profile, intersected with exact values when
/// the automorphism has a recognized structure.
pub fn lyapunov_bounds_from_profile(auto: &Automorphism, p: &CodingRangeProfile, budget: u64) -> Result<LyapunovBounds> {
    if p.n_max == 0 {
        return Err(Error::PreconditionFailed("n_max must be at least 1".into()));
    }
    let mut am = Interval { lo: max_ratio(&p.w_minus, 1), hi: min_ratio(&p.w_minus_inv, -1) };
    let mut ap = Interval { lo: max_ratio(&p.w_plus_inv, -1), hi: min_ratio(&p.w_plus, 1) };
    let mut ami = Interval { lo: max_ratio(&p.w_minus_inv, 1), hi: min_ratio(&p.w_minus, -1) };
    let mut api = Interval { lo: max_ratio(&p.w_plus, -1), hi: min_ratio(&p.w_plus_inv, 1) };
    let mut method = ExponentMethod::Subadditive;
    let exact = match exact_from_shift_power(p) {
        Some(e) => Some((e, ExponentMethod::ShiftPower)),
        None => exact_exponents(auto, p.n_max, budget, 2)?,
    };
    if let Some(((a, b, c, d), how)) = exact {
        let clash = || Error::InternalInvariantViolation("exact exponents fall outside the certified intervals".into());
        am = am.intersect(&Interval::point(a)).ok_or_else(clash)?;
        ap = ap.intersect(&Interval::point(b)).ok_or_else(clash)?;
        ami = ami.intersect(&Interval::point(c)).ok_or_else(clash)?;
        api = api.intersect(&Interval::point(d)).ok_or_else(clash)?;
        method = how;
    }
    let distortion = verdict(&am, &ap);
    let distortion_inv = verdict(&ami, &api);
    Ok(LyapunovBounds {
        alpha_minus: am,
        alpha_plus: ap,
        alpha_minus_inv: ami,
        alpha_plus_inv: api,
        n_max: p.n_max,
        method,
        distortion,
        distortion_inv,
    })
}

/// `r φ r⁻¹` for the coordinate reversal `r(x)_i = x_{-i}`; windows are
/// reversed and carried through the transpose edge bijection.
pub fn reverse_code(code: &SlidingBlockCode, transposed: &Arc<EdgeShift>, bijection: &[EdgeId]) -> Result<SlidingBlockCode> {
    let mut back = vec![0; bijection.len()];
    for (e, &t) in bijection.iter().enumerate() {
        back[t as usize] = e as EdgeId;
    }
    let code2 = code.clone();
    let bij = bijection.to_vec();
    SlidingBlockCode::from_fn(transposed.clone(), transposed.clone(), code.anticipation(), code.memory(), move |v| {
        let w: Vec<EdgeId> = v.iter().rev().map(|&e| back[e as usize]).collect();
        bij[code2.rule(&w) as usize]
    })
}

pub fn reverse_automorphism(auto: &Automorphism) -> Result<(Arc<EdgeShift>, Automorphism)> {
    let (t, bij) = transpose_shift(auto.shift());
    let t = Arc::new(t);
    let f = reverse_code(auto.forward(), &t, &bij)?;
    let g = reverse_code(auto.inverse_code(), &t, &bij)?;
    Ok((t, verify_automorphism(&f, &g)?))
}

pub fn interval_is_nonneg(i: &Interval) -> bool {
    !i.lo.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::rational::q;

    #[test]
    fn shift_coded_coordinates() {
        let s = builtins::shift_map(builtins::full_shift(2).unwrap()).unwrap();
        let f = s.forward();
        assert!(coded_minus(f, -1));
        assert!(!coded_minus(f, 0));
        assert!(coded_plus(f, -1));
        let inv = s.inverse_code();
        assert!(!coded_plus(inv, 0));
        assert!(coded_plus(inv, 1));
    }

    #[test]
    fn identity_coded() {
        let id = builtins::identity(builtins::golden_mean());
        assert!(coded_minus(id.forward(), 0));
        assert!(coded_minus(id.forward(), -3));
        assert!(!coded_minus(id.forward(), 1));
    }

    #[test]
    fn tau_square_coded_at_zero() {
        let (_, tau) = builtins::tau_golden().unwrap();
        let t2 = tau.power(2).unwrap();
        assert!(coded_minus(&t2, 0));
        assert_eq!(coded_minus(&t2, 0), naive::coded_minus(&t2, 0));
    }

    #[test]
    fn shift_w_values() {
        let s = builtins::shift_map(builtins::full_shift(2).unwrap()).unwrap();
        for n in 1..=4 {
            let w = w_values(&s, n).unwrap();
            assert_eq!((w.minus, w.plus, w.minus_inv, w.plus_inv), (-(n as i64), -(n as i64), n as i64, n as i64));
        }
        let b = lyapunov_bounds(&s, 3).unwrap();
        assert_eq!(b.alpha_minus, Interval::point(q(-1)));
        assert_eq!(b.alpha_plus, Interval::point(q(-1)));
        assert_eq!(b.distortion, Distortion::CertifiedNotDistorted);
    }

    #[test]
    fn tau_w_values() {
        let (_, tau) = builtins::tau_golden().unwrap();
        for n in 1..=3 {
            let w = w_values(&tau, n).unwrap();
            let n = n as i64;
            assert_eq!((w.minus, w.plus, w.minus_inv, w.plus_inv), (0, n, -n, 0));
        }
    }

    #[test]
    fn identity_bounds() {
        let id = builtins::identity(builtins::golden_mean());
        let b = lyapunov_bounds(&id, 2).unwrap();
        assert_eq!(b.alpha_minus, Interval::point(q(0)));
        assert_eq!(b.alpha_plus, Interval::point(q(0)));
        assert_eq!(b.distortion, Distortion::ConsistentWithDistortion);
    }

    #[test]
    fn reverse_of_shift() {
        let s = builtins::shift_map(builtins::golden_mean()).unwrap();
        let (t, r) = reverse_automorphism(&s).unwrap();
        assert_eq!((r.forward().memory(), r.forward().anticipation()), (1, 0));
        assert!(r.forward().same_map(builtins::inverse_shift(t).unwrap().forward()));
        let (_, rr) = reverse_automorphism(&r).unwrap();
        assert!(rr.same_map(&s));
    }
}
