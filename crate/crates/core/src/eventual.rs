//! The eventual range `R(A) = Q^k A^k` and the action of `A` on it.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly;
use crate::rational::{q_to_f64, vec_mul, QMatrix, Q};
use crate::shift::EdgeShift;

#[derive(Clone, Debug)]
pub struct DimensionData {
    k: usize,
    a: QMatrix,
    a_pow_k: QMatrix,
    /// Reduced echelon rows spanning `R(A)`.
    basis: QMatrix,
    pivots: Vec<usize>,
    delta: QMatrix,
    delta_inv: QMatrix,
    rho_minus: f64,
    char_poly: Vec<Q>,
}

impl DimensionData {
    pub fn new(shift: &EdgeShift) -> Result<Self> {
        let k = shift.num_states();
        let a = QMatrix::from_i64(&shift.matrix().to_i64_rows());
        let a_pow_k = a.pow(k as u64);
        let (red, pivots) = a_pow_k.rref();
        let d = pivots.len();
        if d == 0 {
            return Err(Error::NilpotentMatrix);
        }
        let basis = QMatrix::from_rows((0..d).map(|i| red.row(i).to_vec()).collect());
        let mut delta = QMatrix::zeros(d, d);
        for i in 0..d {
            let img = vec_mul(basis.row(i), &a);
            for (j, &p) in pivots.iter().enumerate() {
                delta.set(i, j, img[p].clone());
            }
        }
        let delta_inv = delta
            .inverse()
            .ok_or_else(|| Error::InternalInvariantViolation("A restricted to its eventual range is singular".into()))?;
        let char_poly = a.char_poly();
        let (nonzero, _) = poly::strip_zero_roots(&char_poly);
        let smallest = poly::distinct_roots(&nonzero).iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let out = Self { k, a, a_pow_k, basis, pivots, delta, delta_inv, rho_minus: 1.0 / smallest, char_poly };
        for i in 0..d {
            let img = vec_mul(out.basis.row(i), &out.a);
            if out.coords(&img).is_none() {
                return Err(Error::InternalInvariantViolation("eventual range is not A-invariant".into()));
            }
        }
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `δ_A` restricted to `R(A)`, in basis coordinates.
    pub fn delta(&self) -> &QMatrix {
        &self.delta
    }

    pub fn delta_inv(&self) -> &QMatrix {
        &self.delta_inv
    }

    /// Spectral radius of `δ_A^{-1}` on `R(A)`.
    pub fn rho_minus(&self) -> f64 {
        self.rho_minus
    }

    /// `det(tI - A)`, descending; integer-valued.
    pub fn char_poly(&self) -> &[Q] {
        &self.char_poly
    }

    pub fn a_pow_k(&self) -> &QMatrix {
        &self.a_pow_k
    }

    /// Basis coordinates of `x`, or `None` if `x` is not in `R(A)`.
    /// With a reduced echelon basis the coordinates are the pivot entries.
    pub fn coords(&self, x: &[Q]) -> Option<Vec<Q>> {
        let c: Vec<Q> = self.pivots.iter().map(|&p| x[p].clone()).collect();
        (self.embed(&c) == x).then_some(c)
    }

    pub fn embed(&self, coords: &[Q]) -> Vec<Q> {
        vec_mul(coords, &self.basis)
    }

    /// `δ^j` in basis coordinates, negative `j` allowed.
    pub fn delta_pow(&self, j: i64) -> QMatrix {
        if j >= 0 {
            self.delta.pow(j as u64)
        } else {
            self.delta_inv.pow(j.unsigned_abs())
        }
    }

    /// Membership in `G_A`: `x ∈ R(A)` and `x A^j` integral for some `j <= 2k`.
    pub fn in_group(&self, x: &[Q]) -> bool {
        if self.coords(x).is_none() {
            return false;
        }
        let mut v = x.to_vec();
        for _ in 0..=2 * self.k {
            if v.iter().all(|c| c.denom().is_one()) {
                return true;
            }
            v = vec_mul(&v, &self.a);
        }
        false
    }

    /// Membership in `G_A^+`: some `x A^j` is a nonnegative integer vector.
    pub fn in_positive_cone(&self, x: &[Q]) -> bool {
        if self.coords(x).is_none() {
            return false;
        }
        let mut v = x.to_vec();
        for _ in 0..=2 * self.k {
            if v.iter().all(|c| c.denom().is_one() && *c >= Q::zero()) {
                return true;
            }
            v = vec_mul(&v, &self.a);
        }
        false
    }

    /// Distinct eigenvalues of `δ_A` on `R(A)` (the nonzero spectrum of `A`).
    pub fn nonzero_spectrum(&self) -> Vec<Complex64> {
        let (nonzero, _) = poly::strip_zero_roots(&self.char_poly);
        poly::distinct_roots(&nonzero)
    }

    /// Left Perron vector expressed in basis coordinates (floating point).
    pub fn perron_coords(&self, left: &[f64]) -> Vec<f64> {
        self.pivots.iter().map(|&p| left[p]).collect()
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.basis.row(i).iter().map(q_to_f64).collect()).collect()
    }
}

pub fn dimension_data(shift: &EdgeShift) -> Result<DimensionData> {
    DimensionData::new(shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn shift(rows: &[&[u64]]) -> EdgeShift {
        EdgeShift::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn full_two_shift() {
        let d = dimension_data(&shift(&[&[2]])).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.delta(), &QMatrix::from_i64(&[vec![2]]));
        assert!((d.rho_minus() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn golden_mean() {
        let d = dimension_data(&shift(&[&[1, 1], &[1, 0]])).unwrap();
        assert_eq!(d.dim(), 2);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((d.rho_minus() - phi).abs() < 1e-12);
    }

    #[test]
    fn matrix_b() {
        let d = dimension_data(&shift(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(d.dim(), 2);
        assert!((d.rho_minus() - 1.0).abs() < 1e-12);
        assert_eq!(d.char_poly(), &[q(1), q(-4), q(3)]);
    }

    #[test]
    fn singular_matrix_has_smaller_range() {
        // rank one: R(A) is spanned by (1, 1)
        let d = dimension_data(&shift(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.delta(), &QMatrix::from_i64(&[vec![2]]));
        assert!(d.coords(&[q(3), q(3)]).is_some());
        assert!(d.coords(&[q(1), q(0)]).is_none());
        assert!(d.in_group(&[Q::new(1.into(), 4.into()), Q::new(1.into(), 4.into())]));
        assert!(!d.in_group(&[Q::new(1.into(), 3.into()), Q::new(1.into(), 3.into())]));
    }

    #[test]
    fn nilpotent_rejected() {
        let s = shift(&[&[0, 1], &[0, 0]]);
        assert_eq!(dimension_data(&s).unwrap_err(), Error::NilpotentMatrix);
    }

    #[test]
    fn restricted_char_poly_divides_out_zero_roots() {
        let s = shift(&[&[1, 1, 0], &[1, 1, 0], &[1, 0, 1]]);
        let d = dimension_data(&s).unwrap();
        let (nonzero, m) = poly::strip_zero_roots(d.char_poly());
        assert_eq!(m, d.k() - d.dim());
        assert_eq!(d.delta().char_poly(), nonzero);
    }
}
