//! Spectral conditions on integer polynomials and a bounded search for
//! primitive nonnegative matrices realizing a prescribed nonzero spectrum.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eventual::dimension_data;
use crate::matrix::NonnegIntMatrix;
use crate::perron::perron_data;
use crate::poly::roots_f64;
use crate::shift::EdgeShift;

pub const DEFAULT_N: usize = 12;
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;
pub const SEARCH_SEED: u64 = 0x5eed_0f_c0de;

/// Monic integer polynomial, coefficients in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.first() != Some(&1) {
            return Err(Error::NonMonic);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> i64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn roots(&self) -> Vec<Complex64> {
        roots_f64(&self.coeffs.iter().map(|&c| c as f64).collect::<Vec<_>>())
    }
}

impl TryFrom<Vec<i64>> for IntPolynomial {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IntPolynomial> for Vec<i64> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs
    }
}

/// `tr_k = Σ λ_i^k` for `k = 1..=n`, by Newton's identities.
pub fn power_traces(p: &IntPolynomial, n: usize) -> Vec<BigInt> {
    let d = p.degree();
    // p = t^d + c_1 t^{d-1} + ... ; p_k = -(k c_k + Σ_{i<k} c_i p_{k-i})
    let c = |i: usize| -> BigInt { if i <= d { BigInt::from(p.coeffs[i]) } else { BigInt::zero() } };
    let mut tr: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut s = BigInt::from(k) * c(k);
        for i in 1..k {
            s += c(i) * &tr[k - i - 1];
        }
        tr.push(-s);
    }
    tr
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `Σ_{k|n} μ(n/k) tr_k` for `n = 1..=traces.len()`.
pub fn net_traces(traces: &[BigInt]) -> Vec<BigInt> {
    (1..=traces.len() as u64)
        .map(|n| {
            (1..=n)
                .filter(|k| n % k == 0)
                .map(|k| BigInt::from(mobius(n / k)) * &traces[(k - 1) as usize])
                .fold(BigInt::zero(), |a, b| a + b)
        })
        .collect()
}

/// Exact traces of `M^k`, `k = 1..=n`.
pub fn matrix_traces(m: &NonnegIntMatrix, n: usize) -> Vec<BigInt> {
    let s = m.size();
    let a: Vec<Vec<BigInt>> = m.rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let mut p = a.clone();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        out.push((0..s).map(|i| p[i][i].clone()).fold(BigInt::zero(), |x, y| x + y));
        if k < n {
            p = (0..s)
                .map(|i| (0..s).map(|j| (0..s).map(|l| &p[i][l] * &a[l][j]).fold(BigInt::zero(), |x, y| x + y)).collect())
                .collect();
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    Pass,
    Fail,
    Indeterminate,
}

impl Condition {
    fn from_margin(margin: f64, tol: f64) -> Self {
        if margin > tol {
            Condition::Pass
        } else if margin >= -tol {
            Condition::Indeterminate
        } else {
            Condition::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralConditionsReport {
    pub poly: Vec<i64>,
    pub n_checked: usize,
    pub perron: Condition,
    pub lambda_d: f64,
    pub perron_margin: f64,
    #[serde(serialize_with = "ser_big")]
    pub traces: Vec<BigInt>,
    #[serde(serialize_with = "ser_big")]
    pub net_traces: Vec<BigInt>,
    pub net_trace: Condition,
    pub min_modulus_root: f64,
    pub reciprocal: Condition,
    pub reciprocal_margin: f64,
    pub tol: f64,
}

fn ser_big<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl SpectralConditionsReport {
    /// Conditions (1) and (2) hold.
    pub fn realizable_conditions(&self) -> bool {
        self.perron == Condition::Pass && self.net_trace == Condition::Pass
    }
}

pub fn check_conditions(p: &IntPolynomial, n: usize, tol: f64) -> Result<SpectralConditionsReport> {
    if n == 0 {
        return Err(Error::PreconditionFailed("N must be at least 1".into()));
    }
    if p.constant_term() == 0 {
        return Err(Error::ZeroConstantTerm);
    }
    let roots = p.roots();
    let top = roots[0];
    let rest_max = roots[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lambda_d = top.norm();
    let (perron, perron_margin) = if top.re <= 0.0 || top.im.abs() > tol {
        (Condition::Fail, -(top.im.abs()).max(if top.re <= 0.0 { lambda_d } else { 0.0 }))
    } else {
        let m = top.re - rest_max;
        (Condition::from_margin(m, tol), m)
    };
    let traces = power_traces(p, n);
    let nets = net_traces(&traces);
    let net_trace = if nets.iter().all(|x| !x.is_negative()) { Condition::Pass } else { Condition::Fail };
    let min_mod = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let reciprocal_margin = 1.0 / min_mod - lambda_d;
    Ok(SpectralConditionsReport {
        poly: p.coeffs.clone(),
        n_checked: n,
        perron,
        lambda_d,
        perron_margin,
        traces,
        net_traces: nets,
        net_trace,
        min_modulus_root: min_mod,
        reciprocal: Condition::from_margin(reciprocal_margin, tol),
        reciprocal_margin,
        tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchStage {
    Companion,
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, Serialize)]
pub enum SearchOutcome {
    Found { matrix: NonnegIntMatrix, stage: SearchStage, candidates: u64 },
    NotFound { candidates: u64 },
}

impl SearchOutcome {
    pub fn matrix(&self) -> Option<&NonnegIntMatrix> {
        match self {
            SearchOutcome::Found { matrix, .. } => Some(matrix),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

struct Target {
    traces: Vec<i128>,
    max_entry: u64,
}

impl Target {
    /// `tr(A^k)` match for every `k <= size`, which fixes `det(tI - A)`.
    fn matches(&self, a: &[Vec<i128>]) -> bool {
        let s = a.len();
        let mut p = a.to_vec();
        for k in 0..s {
            let t: i128 = (0..s).map(|i| p[i][i]).sum();
            if t != self.traces[k] {
                return false;
            }
            if k + 1 < s {
                let mut next = vec![vec![0i128; s]; s];
                for i in 0..s {
                    for l in 0..s {
                        if p[i][l] == 0 {
                            continue;
                        }
                        for j in 0..s {
                            next[i][j] = next[i][j].saturating_add(p[i][l].saturating_mul(a[l][j]));
                        }
                    }
                }
                p = next;
            }
        }
        true
    }
}

fn accept(a: &[Vec<i128>]) -> Option<NonnegIntMatrix> {
    let m = NonnegIntMatrix::new(a.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect()).ok()?;
    m.is_primitive().then_some(m)
}

/// Companion matrix of `t^pad p(t)` (first row `-c_1 .. -c_d`, ones below
/// the diagonal) when all its entries are nonnegative.
fn companion(p: &IntPolynomial, pad: usize) -> Option<Vec<Vec<i128>>> {
    let s = p.degree() + pad;
    let mut a = vec![vec![0i128; s]; s];
    for (j, &c) in p.coeffs[1..].iter().enumerate() {
        if c > 0 {
            return None;
        }
        a[0][j] = -c as i128;
    }
    for i in 1..s {
        a[i][i - 1] = 1;
    }
    Some(a)
}

struct Dfs<'a> {
    target: &'a Target,
    size: usize,
    tr2: i128,
    a: Vec<Vec<i128>>,
    pairs: Vec<(usize, usize)>,
    used: u64,
    budget: u64,
}

impl Dfs<'_> {
    fn diag(&mut self, i: usize, left: i128) -> Option<NonnegIntMatrix> {
        if self.used >= self.budget {
            return None;
        }
        if i + 1 == self.size {
            if left > self.target.max_entry as i128 {
                return None;
            }
            self.a[i][i] = left;
            let sq: i128 = (0..self.size).map(|k| self.a[k][k] * self.a[k][k]).sum();
            if sq > self.tr2 {
                return None;
            }
            return self.off(0, sq);
        }
        for v in 0..=left.min(self.target.max_entry as i128) {
            self.a[i][i] = v;
            if let Some(m) = self.diag(i + 1, left - v) {
                return Some(m);
            }
        }
        None
    }

    fn off(&mut self, k: usize, tr2: i128) -> Option<NonnegIntMatrix> {
        if self.used >= self.budget {
            return None;
        }
        if k == self.pairs.len() {
            self.used += 1;
            if tr2 == self.tr2 && self.target.matches(&self.a) {
                return accept(&self.a);
            }
            return None;
        }
        let (i, j) = self.pairs[k];
        let me = self.target.max_entry as i128;
        for x in 0..=me {
            for y in 0..=me {
                let t = tr2 + 2 * x * y;
                if t > self.tr2 {
                    break;
                }
                self.a[i][j] = x;
                self.a[j][i] = y;
                if let Some(m) = self.off(k + 1, t) {
                    return Some(m);
                }
            }
        }
        self.a[i][j] = 0;
        self.a[j][i] = 0;
        None
    }
}

/// Deterministic bounded search: companion-plus-padding candidates, then an
/// exhaustive trace-pruned scan by size, then seeded random sampling.
pub fn search_primitive_realization(p: &IntPolynomial, max_size: usize, max_entry: u64, budget: u64) -> Result<SearchOutcome> {
    let report = check_conditions(p, DEFAULT_N, crate::perron::DEFAULT_TOL)?;
    if !report.realizable_conditions() {
        return Err(Error::PreconditionFailed("Perron and net trace conditions are not verified".into()));
    }
    let d = p.degree();
    if max_size < d {
        return Ok(SearchOutcome::NotFound { candidates: 0 });
    }
    let to_i128 = |x: &BigInt| i128::try_from(x).unwrap_or(i128::MAX);
    let target = Target { traces: power_traces(p, max_size).iter().map(to_i128).collect(), max_entry };
    let (tr1, tr2) = (target.traces[0], target.traces.get(1).copied().unwrap_or(0));
    let mut used = 0u64;

    for pad in 0..=max_size - d {
        used += 1;
        if let Some(a) = companion(p, pad) {
            if a.iter().flatten().all(|&x| x <= max_entry as i128) && target.matches(&a) {
                if let Some(m) = accept(&a) {
                    return Ok(SearchOutcome::Found { matrix: m, stage: SearchStage::Companion, candidates: used });
                }
            }
        }
    }
    if tr1 < 0 {
        return Ok(SearchOutcome::NotFound { candidates: used });
    }

    for size in d..=max_size {
        let pairs = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).collect();
        let mut dfs = Dfs { target: &target, size, tr2, a: vec![vec![0; size]; size], pairs, used, budget };
        let found = dfs.diag(0, tr1);
        used = dfs.used;
        if let Some(m) = found {
            return Ok(SearchOutcome::Found { matrix: m, stage: SearchStage::Exhaustive, candidates: used });
        }
        if used >= budget {
            break;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    while used < budget {
        used += 1;
        let size = rng.gen_range(d..=max_size);
        let mut a = vec![vec![0i128; size]; size];
        // diagonal drawn to sum to tr1
        let mut left = tr1;
        for i in 0..size {
            let v = if i + 1 == size { left } else { rng.gen_range(0..=left.min(max_entry as i128)) };
            a[i][i] = v;
            left -= v;
        }
        if a[size - 1][size - 1] > max_entry as i128 {
            continue;
        }
        for (i, row) in a.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if i != j {
                    *x = rng.gen_range(0..=max_entry as i128);
                }
            }
        }
        if target.matches(&a) {
            if let Some(m) = accept(&a) {
                return Ok(SearchOutcome::Found { matrix: m, stage: SearchStage::Random, candidates: used });
            }
        }
    }
    Ok(SearchOutcome::NotFound { candidates: used })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EbOutcome {
    /// `log ρ(δ⁻¹) > log λ_A`: the entropy bound fails for `σ_A⁻¹`.
    Confirmed,
    NotStrict,
    NotFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct EbReport {
    pub outcome: EbOutcome,
    pub log_rho_delta_inv: f64,
    pub log_lambda: f64,
    pub gap: f64,
    pub tol: f64,
}

pub fn verify_eb_failure(m: &NonnegIntMatrix, tol: f64) -> Result<EbReport> {
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let shift = EdgeShift::new(m.clone());
    let dim = dimension_data(&shift)?;
    let perron = perron_data(&shift, tol)?;
    let log_rho_delta_inv = dim.rho_minus().ln();
    let log_lambda = perron.lambda.ln();
    let gap = log_rho_delta_inv - log_lambda;
    let outcome = if gap > tol {
        EbOutcome::Confirmed
    } else if gap >= -tol {
        EbOutcome::NotStrict
    } else {
        EbOutcome::NotFailure
    };
    Ok(EbReport { outcome, log_rho_delta_inv, log_lambda, gap, tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.to_vec()).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn traces_by_hand() {
        assert_eq!(power_traces(&poly(&[1, -2]), 4), big(&[2, 4, 8, 16]));
        assert_eq!(power_traces(&poly(&[1, -1, -1]), 3), big(&[1, 3, 4]));
        assert_eq!(power_traces(&poly(&[1, -5, -6, 1]), 3), big(&[5, 37, 212]));
    }

    #[test]
    fn mobius_small() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), m);
        }
    }

    #[test]
    fn conditions_two() {
        let r = check_conditions(&poly(&[1, -2]), 6, 1e-9).unwrap();
        assert_eq!(r.perron, Condition::Pass);
        assert_eq!(r.net_trace, Condition::Pass);
        assert_eq!(r.net_traces[1], BigInt::from(2));
        assert_eq!(r.reciprocal, Condition::Fail);
    }

    #[test]
    fn conditions_rotation() {
        let r = check_conditions(&poly(&[1, 0, 1]), 6, 1e-9).unwrap();
        assert_eq!(r.perron, Condition::Fail);
    }

    #[test]
    fn rejects_bad_polys() {
        assert_eq!(IntPolynomial::new(vec![2, 1]).unwrap_err(), Error::NonMonic);
        assert_eq!(check_conditions(&poly(&[1, -2, 0]), 4, 1e-9).unwrap_err(), Error::ZeroConstantTerm);
    }

    #[test]
    fn small_realizations() {
        let m = search_primitive_realization(&poly(&[1, -2]), 3, 4, 1000).unwrap();
        assert_eq!(m.matrix().unwrap().rows(), vec![vec![2]]);
        let m = search_primitive_realization(&poly(&[1, -1, -1]), 3, 4, 1000).unwrap();
        assert_eq!(m.matrix().unwrap().rows(), vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn cubic_realization() {
        let p = poly(&[1, -5, -6, 1]);
        let out = search_primitive_realization(&p, 6, 8, DEFAULT_SEARCH_BUDGET).unwrap();
        let m = out.matrix().expect("found");
        assert_eq!(matrix_traces(m, 3), big(&[5, 37, 212]));
        let r = verify_eb_failure(m, 1e-9).unwrap();
        assert_eq!(r.outcome, EbOutcome::Confirmed);
        assert!(r.gap > 0.1);
    }

    #[test]
    fn eb_small_cases() {
        let r = verify_eb_failure(&NonnegIntMatrix::new(vec![vec![2]]).unwrap(), 1e-9).unwrap();
        assert_eq!(r.outcome, EbOutcome::NotFailure);
        let g = NonnegIntMatrix::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(verify_eb_failure(&g, 1e-9).unwrap().outcome, EbOutcome::NotStrict);
        let p = NonnegIntMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(verify_eb_failure(&p, 1e-9).unwrap_err(), Error::NotPrimitive);
    }
}
