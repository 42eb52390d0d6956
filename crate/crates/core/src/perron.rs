//! Perron eigenvalue and eigenvectors by power iteration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shift::EdgeShift;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct PerronData {
    pub lambda: f64,
    /// Right eigenvector, `‖v‖₁ = 1`.
    pub right: Vec<f64>,
    /// Left eigenvector, `‖v‖₁ = 1`.
    pub left: Vec<f64>,
    /// `log lambda`, in nats.
    pub entropy: f64,
    pub residual: f64,
}

impl PerronData {
    /// `max v_r / min v_r`: with `k` states,
    /// `|log P(n) / n - log lambda| <= (log k + log C) / n`.
    pub fn path_count_constant(&self) -> f64 {
        let max = self.right.iter().copied().fold(f64::MIN, f64::max);
        let min = self.right.iter().copied().fold(f64::MAX, f64::min);
        max / min
    }
}

fn apply(rows: &[Vec<f64>], v: &[f64], transpose: bool) -> Vec<f64> {
    let k = v.len();
    let mut out = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            if transpose {
                out[i] += rows[j][i] * v[j];
            } else {
                out[i] += rows[i][j] * v[j];
            }
        }
    }
    out
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

fn residual(rows: &[Vec<f64>], v: &[f64], lambda: f64, transpose: bool) -> f64 {
    apply(rows, v, transpose).iter().zip(v).map(|(a, b)| (a - lambda * b).abs()).sum()
}

/// Power iteration on `A + I`, which is primitive whenever `A` is
/// irreducible and has the same Perron vector.
fn perron_vector(rows: &[Vec<f64>], transpose: bool) -> (f64, Vec<f64>) {
    let k = rows.len();
    let mut v = vec![1.0 / k as f64; k];
    let mut lambda = 0.0;
    for _ in 0..200_000 {
        let av = apply(rows, &v, transpose);
        let mut next: Vec<f64> = av.iter().zip(&v).map(|(a, b)| a + b).collect();
        normalize(&mut next);
        let delta: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = next;
        lambda = apply(rows, &v, transpose).iter().sum::<f64>();
        if delta < 1e-16 {
            break;
        }
    }
    (lambda, v)
}

pub fn perron_data(shift: &EdgeShift, tol: f64) -> Result<PerronData> {
    if !shift.is_irreducible() {
        return Err(Error::ReducibleInput);
    }
    let rows: Vec<Vec<f64>> = shift.matrix().rows().into_iter().map(|r| r.into_iter().map(|x| x as f64).collect()).collect();
    let (lambda, right) = perron_vector(&rows, false);
    let (_, left) = perron_vector(&rows, true);
    let res = residual(&rows, &right, lambda, false).max(residual(&rows, &left, lambda, true));
    if res > tol {
        return Err(Error::InternalInvariantViolation(format!("power iteration residual {res:e} exceeds tolerance {tol:e}")));
    }
    Ok(PerronData { lambda, right, left, entropy: lambda.ln(), residual: res })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_two() {
        let p = perron_data(&EdgeShift::full(2).unwrap(), DEFAULT_TOL).unwrap();
        assert!((p.lambda - 2.0).abs() < 1e-12);
        assert_eq!(p.right, vec![1.0]);
    }

    #[test]
    fn golden_mean() {
        let p = perron_data(&EdgeShift::from_rows(vec![vec![1, 1], vec![1, 0]]).unwrap(), DEFAULT_TOL).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((p.lambda - phi).abs() < 1e-12);
        assert!((p.entropy - phi.ln()).abs() < 1e-12);
        assert!((p.right[0] / p.right[1] - phi).abs() < 1e-12);
    }

    #[test]
    fn symmetric_b() {
        let p = perron_data(&EdgeShift::from_rows(vec![vec![2, 1], vec![1, 2]]).unwrap(), DEFAULT_TOL).unwrap();
        assert!((p.lambda - 3.0).abs() < 1e-12);
        assert!((p.right[0] - 0.5).abs() < 1e-12 && (p.right[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn periodic_irreducible() {
        // eigenvalues ±sqrt(2); iteration on A + I still converges
        let p = perron_data(&EdgeShift::from_rows(vec![vec![0, 2], vec![1, 0]]).unwrap(), DEFAULT_TOL).unwrap();
        assert!((p.lambda - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reducible_rejected() {
        let s = EdgeShift::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(perron_data(&s, DEFAULT_TOL).unwrap_err(), Error::ReducibleInput);
    }
}
