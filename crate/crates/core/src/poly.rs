//! Polynomials in descending-coefficient form: exact rational gcd machinery
//! and a numeric root finder (Aberth–Ehrlich with Newton polishing).

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::rational::{q_to_f64, Q};

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    let lead = p.iter().position(|c| !c.is_zero()).unwrap_or(p.len());
    p.drain(..lead);
    p
}

pub fn derivative(p: &[Q]) -> Vec<Q> {
    let n = p.len();
    if n <= 1 {
        return vec![];
    }
    p[..n - 1]
        .iter()
        .enumerate()
        .map(|(i, c)| c * Q::from_integer(((n - 1 - i) as i64).into()))
        .collect()
}

/// Remainder of `a` divided by `b` (`b` nonzero).
pub fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    while r.len() >= b.len() {
        let f = &r[0] / &b[0];
        for (i, bc) in b.iter().enumerate() {
            let v = &r[i] - &f * bc;
            r[i] = v;
        }
        r = trim(r);
    }
    r
}

/// Exact quotient of `a` by `b`, assuming `b` divides `a`.
pub fn div_exact(a: &[Q], b: &[Q]) -> Vec<Q> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return vec![];
    }
    let mut out = Vec::with_capacity(r.len() - b.len() + 1);
    while r.len() >= b.len() && !r.is_empty() {
        let f = &r[0] / &b[0];
        for (i, bc) in b.iter().enumerate() {
            let v = &r[i] - &f * bc;
            r[i] = v;
        }
        out.push(f);
        r.remove(0);
    }
    out
}

pub fn monic(p: &[Q]) -> Vec<Q> {
    let p = trim(p.to_vec());
    match p.first() {
        Some(lead) => {
            let lead = lead.clone();
            p.into_iter().map(|c| c / &lead).collect()
        }
        None => p,
    }
}

pub fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// `p / gcd(p, p')`: same roots, all simple.
pub fn squarefree_part(p: &[Q]) -> Vec<Q> {
    let p = monic(p);
    if p.len() <= 2 {
        return p;
    }
    let g = gcd(&p, &derivative(&p));
    if g.len() <= 1 {
        return p;
    }
    monic(&div_exact(&p, &g))
}

/// Splits `p = t^m * r` with `r(0) != 0`.
pub fn strip_zero_roots(p: &[Q]) -> (Vec<Q>, usize) {
    let mut p = trim(p.to_vec());
    let mut m = 0;
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
        m += 1;
    }
    (p, m)
}

fn horner(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    // value and derivative
    let mut v = Complex64::zero();
    let mut d = Complex64::zero();
    for &c in p {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// All complex roots of a polynomial with floating coefficients.
pub fn roots_f64(p: &[f64]) -> Vec<Complex64> {
    let lead = p.iter().position(|&c| c != 0.0).unwrap_or(p.len());
    let p: Vec<f64> = p[lead..].iter().map(|c| c / p[lead]).collect();
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![Complex64::new(-p[1], 0.0)];
    }
    // Cauchy bound for the initial circle.
    let radius = 1.0 + p[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5 + 0.1, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, d) = horner(&p, z[i]);
            if v == Complex64::zero() {
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::one() / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::one() - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    // Newton polish
    for zi in z.iter_mut() {
        for _ in 0..8 {
            let (v, d) = horner(&p, *zi);
            if d == Complex64::zero() {
                break;
            }
            let step = v / d;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
            if step.norm() <= 1e-17 * (1.0 + zi.norm()) {
                break;
            }
        }
        if zi.im.abs() < 1e-13 * (1.0 + zi.re.abs()) {
            zi.im = 0.0;
        }
    }
    z.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)).then(b.im.total_cmp(&a.im)));
    z
}

/// Distinct roots of an exact polynomial (multiplicities removed first).
pub fn distinct_roots(p: &[Q]) -> Vec<Complex64> {
    let sf = squarefree_part(p);
    let f: Vec<f64> = sf.iter().map(q_to_f64).collect();
    roots_f64(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn qp(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn squarefree_removes_repeats() {
        // (t-1)^2 (t+2) = t^3 - 3t + 2
        let p = qp(&[1, 0, -3, 2]);
        assert_eq!(squarefree_part(&p), qp(&[1, 1, -2]));
    }

    #[test]
    fn strip_zeros() {
        let (r, m) = strip_zero_roots(&qp(&[1, -3, 0, 0]));
        assert_eq!((r, m), (qp(&[1, -3]), 2));
    }

    #[test]
    fn golden_roots() {
        let r = distinct_roots(&qp(&[1, -1, -1]));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r[0].re - phi).abs() < 1e-14);
        assert!((r[1].re - (1.0 - phi)).abs() < 1e-14);
    }

    #[test]
    fn repeated_unit_roots_are_accurate() {
        // (t-1)^3 (t+1)^2
        let p = qp(&[1, -1, -2, 2, 1, -1]);
        let r = distinct_roots(&p);
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_pair() {
        let r = roots_f64(&[1.0, 0.0, 1.0]);
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14 && z.re.abs() < 1e-14));
    }
}
