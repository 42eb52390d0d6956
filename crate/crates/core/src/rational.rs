//! Exact linear algebra over the rationals (row-vector convention).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Serialized form of a rational: always `"p/q"` with `q > 0`.
pub fn q_to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn q_from_str(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(p, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // very large parts: scale through the integer quotient
            let int = x.to_integer();
            int.to_f64().unwrap_or(f64::NAN)
        }
    }
}

/// Row vector times matrix.
pub fn vec_mul(v: &[Q], m: &QMatrix) -> Vec<Q> {
    assert_eq!(v.len(), m.rows);
    let mut out = vec![Q::zero(); m.cols];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate() {
            let e = m.get(i, j);
            if !e.is_zero() {
                *slot += vi * e;
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rational matrix");
            data.extend(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(q_to_f64).collect()).collect()
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(q_to_string).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(tI - M)`, monic, descending coefficients
    /// (Faddeev–LeVerrier, exact).
    pub fn char_poly(&self) -> Vec<Q> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Q::one()];
        let mut mk = Self::zeros(n, n);
        let ident = Self::identity(n);
        for k in 1..=n {
            // M_k = A * (M_{k-1} + c_{k-1} I)
            let mut shifted = mk.clone();
            let c_prev = coeffs[k - 1].clone();
            for i in 0..n {
                let v = shifted.get(i, i) + &c_prev * ident.get(i, i);
                shifted.set(i, i, v);
            }
            mk = self.mul(&shifted);
            let tr: Q = (0..n).map(|i| mk.get(i, i).clone()).fold(Q::zero(), |a, b| a + b);
            coeffs.push(-tr / q(k as i64));
        }
        coeffs
    }

    pub fn max_abs_entry(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let m = QMatrix::from_i64(&[vec![2, 4], vec![1, 2]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0]);
        assert_eq!(r.row(0), &[q(1), q(2)]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMatrix::from_i64(&[vec![1, 1], vec![1, 0]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, QMatrix::from_i64(&[vec![0, 1], vec![1, -1]]));
        assert!(m.mul(&inv).is_identity());
        assert!(QMatrix::from_i64(&[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    #[test]
    fn char_poly_small() {
        let m = QMatrix::from_i64(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(m.char_poly(), vec![q(1), q(-1), q(-1)]);
        let b = QMatrix::from_i64(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(b.char_poly(), vec![q(1), q(-4), q(3)]);
    }

    #[test]
    fn rational_strings() {
        let x = Q::new(BigInt::from(-3), BigInt::from(6));
        assert_eq!(q_to_string(&x), "-1/2");
        assert_eq!(q_from_str("-1/2"), Some(x));
        assert_eq!(q_from_str("4"), Some(q(4)));
        assert_eq!(q_from_str("1/0"), None);
    }
}
