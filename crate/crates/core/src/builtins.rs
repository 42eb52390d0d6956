//! Named example shifts and automorphisms.

use std::sync::Arc;

use serde_json::Value;

use crate::code::{infer_inverse, verify_automorphism, Automorphism, SlidingBlockCode};
use crate::error::{Error, Result};
use crate::shift::{kronecker_product, EdgeId, EdgeShift};

/// Edge of the symbol `c` in the five-symbol example; `(a, b)` is edge `2a + b`.
pub const FIVE_C: EdgeId = 4;

/// The value of the five-symbol rule on `c (a,b) c`, indexed by `2a + b`.
pub type Completion = [EdgeId; 4];

/// Swaps the two coordinates: `c (a,b) c ↦ (b,a)`.
pub const SWAP_COMPLETION: Completion = [0, 2, 1, 3];

pub fn golden_mean() -> Arc<EdgeShift> {
    Arc::new(EdgeShift::from_rows(vec![vec![1, 1], vec![1, 0]]).expect("valid matrix"))
}

pub fn matrix_b() -> Arc<EdgeShift> {
    Arc::new(EdgeShift::from_rows(vec![vec![2, 1], vec![1, 2]]).expect("valid matrix"))
}

pub fn full_shift(n: u64) -> Result<Arc<EdgeShift>> {
    Ok(Arc::new(EdgeShift::full(n)?))
}

/// Shift builtins: `golden_mean`, `B`, `full2`..`full9`.
pub fn builtin_shift(name: &str) -> Result<Arc<EdgeShift>> {
    match name {
        "golden_mean" => Ok(golden_mean()),
        "B" | "matrix_B" => Ok(matrix_b()),
        _ => match name.strip_prefix("full").and_then(|n| n.parse::<u64>().ok()) {
            Some(n) if n >= 1 => full_shift(n),
            _ => Err(Error::UnknownBuiltin(name.to_string())),
        },
    }
}

fn certify(f: SlidingBlockCode, g: SlidingBlockCode) -> Result<Automorphism> {
    verify_automorphism(&f, &g)
}

pub fn identity(shift: Arc<EdgeShift>) -> Automorphism {
    Automorphism::identity(shift)
}

/// `σ(x)_i = x_{i+1}`.
pub fn shift_map(shift: Arc<EdgeShift>) -> Result<Automorphism> {
    let f = SlidingBlockCode::from_fn(shift.clone(), shift.clone(), 0, 1, |w| w[1])?;
    let g = SlidingBlockCode::from_fn(shift.clone(), shift, 1, 0, |w| w[0])?;
    certify(f, g)
}

pub fn inverse_shift(shift: Arc<EdgeShift>) -> Result<Automorphism> {
    Ok(shift_map(shift)?.inverse())
}

/// Relabels the loops of a one-state shift by `perm`.
pub fn symbol_permutation(shift: Arc<EdgeShift>, perm: &[EdgeId]) -> Result<Automorphism> {
    let mismatch = |reason: &str| Error::BuiltinShiftMismatch { name: "full_shift_symbol_permutation".into(), reason: reason.into() };
    if shift.num_states() != 1 {
        return Err(mismatch("requires a full shift"));
    }
    let n = shift.num_edges();
    let mut seen = vec![false; n];
    for &p in perm {
        if p as usize >= n || std::mem::replace(&mut seen[p as usize], true) {
            return Err(mismatch("parameter is not a permutation of the symbols"));
        }
    }
    if perm.len() != n {
        return Err(mismatch("parameter is not a permutation of the symbols"));
    }
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as EdgeId;
    }
    let perm = perm.to_vec();
    let f = SlidingBlockCode::from_fn(shift.clone(), shift.clone(), 0, 0, move |w| perm[w[0] as usize])?;
    let g = SlidingBlockCode::from_fn(shift.clone(), shift, 0, 0, move |w| inv[w[0] as usize])?;
    certify(f, g)
}

/// The graph automorphism of `[[2,1],[1,2]]` exchanging the two states.
pub fn vertex_swap_b() -> Result<(Arc<EdgeShift>, Automorphism)> {
    let b = matrix_b();
    let map = {
        let b = b.clone();
        move |w: &[EdgeId]| {
            let e = b.edge(w[0]);
            b.edge_between(1 - e.source, 1 - e.target, e.copy).expect("swapped edge exists")
        }
    };
    let f = SlidingBlockCode::from_fn(b.clone(), b.clone(), 0, 0, map)?;
    Ok((b, certify(f.clone(), f)?))
}

fn product_code(shift: &Arc<EdgeShift>, f: &SlidingBlockCode, g: &SlidingBlockCode) -> Result<SlidingBlockCode> {
    let m = f.memory().max(g.memory());
    let a = f.anticipation().max(g.anticipation());
    let split: Vec<(EdgeId, EdgeId)> =
        (0..shift.num_edges() as EdgeId).map(|e| shift.split_edge(e).expect("product shift")).collect();
    let sh = shift.clone();
    let (f, g) = (f.clone(), g.clone());
    SlidingBlockCode::from_fn(shift.clone(), shift.clone(), m, a, move |w| {
        let left: Vec<EdgeId> = w.iter().map(|&e| split[e as usize].0).collect();
        let right: Vec<EdgeId> = w.iter().map(|&e| split[e as usize].1).collect();
        let x = f.rule(&left[m - f.memory()..m + f.anticipation() + 1]);
        let y = g.rule(&right[m - g.memory()..m + g.anticipation() + 1]);
        sh.product_edge(x, y).expect("factor edges pair up")
    })
}

/// `f × g` on the Kronecker product of their shifts.
pub fn product(f: &Automorphism, g: &Automorphism) -> Result<(Arc<EdgeShift>, Automorphism)> {
    let shift = Arc::new(kronecker_product(f.shift(), g.shift()));
    let auto = product_on(&shift, f, g)?;
    Ok((shift, auto))
}

/// `f × g` on a shift carrying a factorization matching the factors' shifts.
pub fn product_on(shift: &Arc<EdgeShift>, f: &Automorphism, g: &Automorphism) -> Result<Automorphism> {
    let fac = shift.factors().ok_or_else(|| Error::BuiltinShiftMismatch {
        name: "product".into(),
        reason: "shift has no recorded factorization".into(),
    })?;
    if !fac.left.same_shift(f.shift()) || !fac.right.same_shift(g.shift()) {
        return Err(Error::ShiftMismatch);
    }
    let fwd = product_code(shift, f.forward(), g.forward())?;
    let inv = product_code(shift, f.inverse_code(), g.inverse_code())?;
    certify(fwd, inv)
}

/// `1 × σ⁻¹` on the square of the golden mean shift.
pub fn tau_golden() -> Result<(Arc<EdgeShift>, Automorphism)> {
    let g = golden_mean();
    product(&identity(g.clone()), &inverse_shift(g)?)
}

/// `σ × σ⁻¹` on the square of the full 2-shift.
pub fn sigma_x_sigma_inv() -> Result<(Arc<EdgeShift>, Automorphism)> {
    let f = full_shift(2)?;
    product(&shift_map(f.clone())?, &inverse_shift(f)?)
}

fn five_symbol_rule(w: &[EdgeId], completion: &Completion) -> EdgeId {
    let (l, x, r) = (w[0], w[1], w[2]);
    if x == FIVE_C {
        return FIVE_C;
    }
    let a = |e: EdgeId| e >> 1;
    let b = |e: EdgeId| e & 1;
    let sym = |a: EdgeId, b: EdgeId| 2 * a + b;
    match (l == FIVE_C, r == FIVE_C) {
        (true, true) => completion[x as usize],
        (true, false) => sym(a(r), a(x)),
        (false, true) => sym(b(x), b(l)),
        (false, false) => sym(a(r), b(l)),
    }
}

/// The range-one code on the full 5-shift over `{(a,b)} ∪ {c}`; the value on
/// `c (a,b) c` is supplied by `completion`.
pub fn five_symbol_code(completion: &Completion) -> Result<SlidingBlockCode> {
    if completion.iter().any(|&e| e > FIVE_C) {
        return Err(Error::BuiltinShiftMismatch { name: "five_symbol".into(), reason: "completion values must be edges 0..=4".into() });
    }
    let shift = full_shift(5)?;
    let completion = *completion;
    SlidingBlockCode::from_fn(shift.clone(), shift, 1, 1, move |w| five_symbol_rule(w, &completion))
}

pub const FIVE_SYMBOL_R_MAX: usize = 3;

pub fn five_symbol(completion: &Completion) -> Result<(Arc<EdgeShift>, Automorphism)> {
    let f = five_symbol_code(completion)?;
    let inv = match infer_inverse(&f, FIVE_SYMBOL_R_MAX) {
        Ok(inv) => inv,
        Err(Error::NotInvertibleWithin(_)) => {
            // report a concrete window on which the candidate fails
            return Err(five_symbol_witness(&f));
        }
        Err(e) => return Err(e),
    };
    Ok((f.source().clone(), certify(f, inv)?))
}

fn five_symbol_witness(f: &SlidingBlockCode) -> Error {
    // two windows with equal image under φ on [-1, 1] ... [-R-1, R+1]
    // are reported through the smallest colliding pair of length-3 cores
    let pairs = f.pairs();
    for (i, (w1, o1)) in pairs.iter().enumerate() {
        for (w2, o2) in &pairs[i + 1..] {
            if o1 == o2 && w1[0] == w2[0] && w1[2] == w2[2] && w1[0] == FIVE_C && w1[2] == FIVE_C {
                return Error::NotInverse { side: "five_symbol completion collapses", window: w2.clone(), got: *o2, expected: w2[1] };
            }
        }
    }
    Error::NotInvertibleWithin(FIVE_SYMBOL_R_MAX)
}

/// Every completion of the five-symbol table, in lexicographic order.
pub fn all_completions() -> Vec<Completion> {
    let mut out = Vec::with_capacity(625);
    for x in 0..625u32 {
        out.push([x / 125, x / 25 % 5, x / 5 % 5, x % 5].map(|d| d as EdgeId));
    }
    out
}

/// Builds a named automorphism. Shift-generic names (`identity`, `shift`,
/// `inverse_shift`, `full_shift_symbol_permutation`) act on `shift`, which
/// defaults to the full 2-shift.
pub fn make_builtin(name: &str, params: &Value, shift: Option<Arc<EdgeShift>>) -> Result<(Arc<EdgeShift>, Automorphism)> {
    let on = |default: u64| -> Result<Arc<EdgeShift>> {
        match &shift {
            Some(s) => Ok(s.clone()),
            None => full_shift(default),
        }
    };
    let fixed = |(s, a): (Arc<EdgeShift>, Automorphism)| -> Result<(Arc<EdgeShift>, Automorphism)> {
        if let Some(given) = &shift {
            if !given.same_shift(&s) {
                return Err(Error::BuiltinShiftMismatch { name: name.into(), reason: format!("defined on {:?}", s.matrix().rows()) });
            }
        }
        Ok((s, a))
    };
    match name {
        "identity" => {
            let s = on(2)?;
            Ok((s.clone(), identity(s)))
        }
        "shift" => {
            let s = on(2)?;
            Ok((s.clone(), shift_map(s)?))
        }
        "inverse_shift" => {
            let s = on(2)?;
            Ok((s.clone(), inverse_shift(s)?))
        }
        "full_shift_symbol_permutation" => {
            let perm: Vec<EdgeId> = match params.get("perm") {
                Some(p) => serde_json::from_value(p.clone()).map_err(|e| Error::BuiltinShiftMismatch {
                    name: name.into(),
                    reason: format!("bad perm parameter: {e}"),
                })?,
                None => vec![1, 2, 0],
            };
            let s = on(perm.len() as u64)?;
            Ok((s.clone(), symbol_permutation(s, &perm)?))
        }
        "vertex_swap_B" => fixed(vertex_swap_b()?),
        "tau_golden" => fixed(tau_golden()?),
        "sigma_x_sigma_inv" => fixed(sigma_x_sigma_inv()?),
        "five_symbol" => {
            let completion = match params.get("completion") {
                None => SWAP_COMPLETION,
                Some(Value::Number(n)) => {
                    let v = n.as_u64().filter(|&v| v <= FIVE_C as u64).ok_or_else(|| Error::BuiltinShiftMismatch {
                        name: name.into(),
                        reason: "completion must be an edge 0..=4".into(),
                    })?;
                    [v as EdgeId; 4]
                }
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::BuiltinShiftMismatch {
                    name: name.into(),
                    reason: format!("bad completion parameter: {e}"),
                })?,
            };
            fixed(five_symbol(&completion)?)
        }
        "product" => {
            let part = |key: &str| -> Result<(Arc<EdgeShift>, Automorphism)> {
                let spec = params.get(key).ok_or_else(|| Error::BuiltinShiftMismatch {
                    name: name.into(),
                    reason: format!("missing parameter {key:?}"),
                })?;
                let inner = spec.get("builtin").and_then(Value::as_str).ok_or_else(|| Error::BuiltinShiftMismatch {
                    name: name.into(),
                    reason: format!("parameter {key:?} needs a \"builtin\" name"),
                })?;
                let inner_shift = match spec.get("shift").and_then(Value::as_str) {
                    Some(s) => Some(builtin_shift(s)?),
                    None => None,
                };
                make_builtin(inner, spec.get("params").unwrap_or(&Value::Null), inner_shift)
            };
            let (_, f) = part("left")?;
            let (_, g) = part("right")?;
            match &shift {
                Some(s) => Ok((s.clone(), product_on(s, &f, &g)?)),
                None => product(&f, &g),
            }
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// The fixed catalogue used wherever "every builtin" is meant.
pub fn catalog() -> Result<Vec<(String, Arc<EdgeShift>, Automorphism)>> {
    let gm = golden_mean();
    let f2 = full_shift(2)?;
    let f3 = full_shift(3)?;
    let mut out = vec![
        ("identity_golden_mean".to_string(), gm.clone(), identity(gm.clone())),
        ("shift_full2".to_string(), f2.clone(), shift_map(f2.clone())?),
        ("inverse_shift_full2".to_string(), f2.clone(), inverse_shift(f2.clone())?),
        ("shift_golden_mean".to_string(), gm.clone(), shift_map(gm)?),
        ("symbol_permutation_full3".to_string(), f3.clone(), symbol_permutation(f3, &[1, 2, 0])?),
    ];
    let (s, a) = vertex_swap_b()?;
    out.push(("vertex_swap_B".into(), s, a));
    let (s, a) = tau_golden()?;
    out.push(("tau_golden".into(), s, a));
    let (s, a) = sigma_x_sigma_inv()?;
    out.push(("sigma_x_sigma_inv".into(), s, a));
    let (s, a) = five_symbol(&SWAP_COMPLETION)?;
    out.push(("five_symbol_swap".into(), s, a));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_swap_is_an_involution() {
        let (b, phi) = vertex_swap_b().unwrap();
        assert_eq!(phi.forward().table(), &[4, 5, 3, 2, 0, 1]);
        assert!(phi.power(2).unwrap().is_identity());
        assert!(infer_inverse(phi.forward(), 0).unwrap().same_map(phi.forward()));
        assert_eq!(b.num_edges(), 6);
    }

    #[test]
    fn five_symbol_table() {
        let f = five_symbol_code(&SWAP_COMPLETION).unwrap();
        let c = FIVE_C;
        // c (0,1) (1,0) -> (a', a) = (1, 0)
        assert_eq!(f.rule(&[c, 1, 2]), 2);
        // (a,b)(a',b')(a'',b'') -> (a'', b)
        assert_eq!(f.rule(&[1, 0, 2]), 3);
        assert_eq!(f.rule(&[0, c, 3]), c);
        let two = f.source().clone();
        assert_eq!(two.num_edges(), 5);
    }

    #[test]
    fn swap_completion_certifies() {
        let (_, phi) = five_symbol(&SWAP_COMPLETION).unwrap();
        assert!(phi.compose(&phi.inverse()).unwrap().forward().is_identity());
    }

    #[test]
    fn constant_completion_fails_with_witness() {
        let err = five_symbol(&[0; 4]).unwrap_err();
        assert!(matches!(err, Error::NotInverse { .. }), "{err:?}");
    }

    #[test]
    fn products() {
        let (s, tau) = tau_golden().unwrap();
        assert_eq!(s.num_edges(), 9);
        assert_eq!((tau.forward().memory(), tau.forward().anticipation()), (1, 0));
        let (s, p) = sigma_x_sigma_inv().unwrap();
        assert_eq!(s.matrix().rows(), vec![vec![4]]);
        assert_eq!((p.forward().memory(), p.forward().anticipation()), (1, 1));
    }

    #[test]
    fn named_construction() {
        let (_, a) = make_builtin("shift", &Value::Null, None).unwrap();
        assert_eq!(a.forward().anticipation(), 1);
        assert!(matches!(make_builtin("nope", &Value::Null, None), Err(Error::UnknownBuiltin(_))));
        let params = serde_json::json!({"left": {"builtin": "identity"}, "right": {"builtin": "inverse_shift"}});
        let (s, p) = make_builtin("product", &params, None).unwrap();
        assert_eq!(s.matrix().rows(), vec![vec![4]]);
        assert_eq!(p.forward().memory(), 1);
    }

    #[test]
    fn catalog_builds() {
        assert_eq!(catalog().unwrap().len(), 9);
    }
}
