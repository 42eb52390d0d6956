//! Rays, beams, the θ-map into the eventual range, and the action `S_φ` of
//! an automorphism on the dimension group.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::code::{Automorphism, SlidingBlockCode};
use crate::coding_range::{w_values, LyapunovBounds};
use crate::error::{Error, Result};
use crate::eventual::DimensionData;
use crate::perron::PerronData;
use crate::poly;
use crate::rational::{q_to_f64, vec_mul, QMatrix, Q};
use crate::report::{Check, Status};
use crate::shift::{EdgeId, EdgeShift, State};
use crate::words::admissible_words;

/// The left-infinite word `…cycle cycle transient` whose last edge sits at
/// coordinate `level`. Stored in normal form: the cycle is primitive and
/// the transient does not start with the cycle's first edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Ray {
    pub level: i64,
    pub cycle: Vec<EdgeId>,
    pub transient: Vec<EdgeId>,
}

impl Ray {
    pub fn new(shift: &EdgeShift, level: i64, cycle: Vec<EdgeId>, transient: Vec<EdgeId>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::PreconditionFailed("ray cycle must be nonempty".into()));
        }
        let mut joined = cycle.clone();
        joined.extend_from_slice(&cycle);
        joined.extend_from_slice(&transient);
        shift.check_word(&joined)?;
        Ok(Self::normalized(level, cycle, transient))
    }

    fn normalized(level: i64, mut cycle: Vec<EdgeId>, mut transient: Vec<EdgeId>) -> Self {
        let p = cycle.len();
        if let Some(d) = (1..=p).find(|&d| p % d == 0 && (0..p).all(|i| cycle[i] == cycle[i % d])) {
            cycle.truncate(d);
        }
        while !transient.is_empty() && transient[0] == cycle[0] {
            cycle.rotate_left(1);
            transient.remove(0);
        }
        Self { level, cycle, transient }
    }

    pub fn last_edge(&self) -> EdgeId {
        *self.transient.last().unwrap_or_else(|| self.cycle.last().expect("nonempty cycle"))
    }

    /// The state at which the edge at coordinate `level` ends.
    pub fn end_state(&self, shift: &EdgeShift) -> State {
        shift.target(self.last_edge())
    }

    /// Edges at coordinates `from..=level` (`from <= level`).
    pub fn suffix_from(&self, from: i64) -> Vec<EdgeId> {
        let need = (self.level - from + 1) as usize;
        let mut out = Vec::with_capacity(need);
        let t = self.transient.len();
        let p = self.cycle.len();
        for idx in (0..need).rev() {
            // idx counts back from the last edge
            let e = if idx < t { self.transient[t - 1 - idx] } else { self.cycle[p - 1 - (idx - t) % p] };
            out.push(e);
        }
        out
    }
}

/// Rays ending at each state, read backwards by always taking the smallest
/// in-edge; `alternative` takes the second smallest at the first state with
/// a choice.
fn greedy_ray(shift: &EdgeShift, state: State, alternative: bool) -> Option<Ray> {
    let mut path: Vec<EdgeId> = Vec::new();
    let mut states = vec![state];
    let mut branched = !alternative;
    loop {
        let s = *states.last().expect("nonempty");
        let ins = shift.in_edges(s);
        let e = if !branched && ins.len() >= 2 {
            branched = true;
            ins[1]
        } else {
            *ins.first()?
        };
        path.push(e);
        let src = shift.source(e);
        if branched {
            if let Some(pos) = states.iter().position(|&x| x == src) {
                // states[pos] reached again: path[pos..] closes a cycle
                let mut cycle: Vec<EdgeId> = path[pos..].to_vec();
                cycle.reverse();
                let mut transient: Vec<EdgeId> = path[..pos].to_vec();
                transient.reverse();
                return Some(Ray::normalized(0, cycle, transient));
            }
        }
        states.push(src);
        if states.len() > 4 * shift.num_states() + 4 {
            return None;
        }
    }
}

pub fn canonical_ray(shift: &EdgeShift, state: State) -> Option<Ray> {
    greedy_ray(shift, state, false)
}

pub fn alternative_ray(shift: &EdgeShift, state: State) -> Option<Ray> {
    let r = greedy_ray(shift, state, true)?;
    (Some(&r) != canonical_ray(shift, state).as_ref()).then_some(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Beam {
    pub level: i64,
    pub rays: Vec<Ray>,
}

impl Beam {
    pub fn single(ray: Ray) -> Self {
        Self { level: ray.level, rays: vec![ray] }
    }

    /// `v_J`: number of rays whose edge at the beam level ends at `J`.
    pub fn count_vector(&self, shift: &EdgeShift) -> Vec<u64> {
        let mut v = vec![0; shift.num_states()];
        for r in &self.rays {
            v[r.end_state(shift)] += 1;
        }
        v
    }

    pub fn union(mut self, other: Beam) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::PreconditionFailed("beams at different levels".into()));
        }
        self.rays.extend(other.rays);
        Ok(self)
    }
}

/// All extensions of `ray` to `to_level`.
pub fn refine_ray(shift: &EdgeShift, ray: &Ray, to_level: i64) -> Result<Beam> {
    if to_level < ray.level {
        return Err(Error::PreconditionFailed("refinement level below the ray level".into()));
    }
    let d = (to_level - ray.level) as usize;
    let end = ray.end_state(shift);
    let rays = extensions(shift, end, d)
        .into_iter()
        .map(|ext| {
            let mut t = ray.transient.clone();
            t.extend(ext);
            Ray::normalized(to_level, ray.cycle.clone(), t)
        })
        .collect();
    Ok(Beam { level: to_level, rays })
}

pub fn refine_beam(shift: &EdgeShift, beam: &Beam, to_level: i64) -> Result<Beam> {
    let mut rays = Vec::new();
    for r in &beam.rays {
        rays.extend(refine_ray(shift, r, to_level)?.rays);
    }
    Ok(Beam { level: to_level, rays })
}

fn extensions(shift: &EdgeShift, from: State, len: usize) -> Vec<Vec<EdgeId>> {
    let mut out: Vec<Vec<EdgeId>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            let s = w.last().map_or(from, |&e| shift.target(e));
            for &e in shift.out_edges(s) {
                let mut v = w.clone();
                v.push(e);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// `θ([U]) = δ^{-k-n}(v_{U,n} A^k)` in eventual-range coordinates.
pub fn theta(beam: &Beam, shift: &EdgeShift, dim: &DimensionData) -> Vec<Q> {
    let v: Vec<Q> = beam.count_vector(shift).into_iter().map(|c| Q::from_integer((c as i64).into())).collect();
    let x = vec_mul(&v, dim.a_pow_k());
    let c = dim.coords(&x).expect("rows of A^k lie in the eventual range");
    vec_mul(&c, &dim.delta_pow(-(dim.k() as i64) - beam.level))
}

/// `φⁿ(R)` for a 0-ray `R`, as a beam at level `-W^-(n, φ⁻¹)`.
pub fn apply_automorphism_to_ray(auto: &Automorphism, n: i64, ray: &Ray) -> Result<Beam> {
    if ray.level != 0 {
        return Err(Error::PreconditionFailed("rays must be given at level 0".into()));
    }
    if n == 0 {
        return Ok(Beam::single(ray.clone()));
    }
    let (code, level) = if n > 0 {
        (auto.power(n)?, -w_values(auto, n as u32)?.minus_inv)
    } else {
        let inv = auto.inverse();
        (inv.power(-n)?, -w_values(&inv, (-n) as u32)?.minus_inv)
    };
    image_beam(&code, ray, level)
}

/// Image of a 0-ray under `code`, cut at `level` (which must make the image
/// a beam at that level).
pub fn image_beam(code: &SlidingBlockCode, ray: &Ray, level: i64) -> Result<Beam> {
    let shift = code.source();
    let (m, a) = (code.memory() as i64, code.anticipation() as i64);
    let t = ray.transient.len() as i64;
    let p = ray.cycle.len() as i64;
    // outputs at j <= j0 only see the periodic part of the input
    let j0 = (-t - a).min(level);
    let from = j0 - p + 1 - m;
    let head = ray.suffix_from(from.min(0));
    let free = (level + a).max(0) as usize;
    let mut out: BTreeSet<Ray> = BTreeSet::new();
    for ext in extensions(shift, ray.end_state(shift), free) {
        let mut x = head.clone();
        x.extend(ext);
        // x[i] sits at coordinate from + i
        let y = |j: i64| -> EdgeId {
            let s = (j - m - from) as usize;
            code.rule(&x[s..s + code.window()])
        };
        let cycle: Vec<EdgeId> = (j0 - p + 1..=j0).map(y).collect();
        let transient: Vec<EdgeId> = (j0 + 1..=level).map(y).collect();
        out.insert(Ray::normalized(level, cycle, transient));
    }
    Ok(Beam { level, rays: out.into_iter().collect() })
}

#[derive(Clone, Debug)]
pub struct DimensionAction {
    pub s_phi: QMatrix,
    pub lambda_phi: f64,
    pub rho: f64,
    pub spectrum: Vec<Complex64>,
    pub inert: bool,
    pub order: Option<u32>,
    pub tol: f64,
}

impl Serialize for DimensionAction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DimensionAction", 7)?;
        st.serialize_field("S_phi", &self.s_phi.to_string_rows())?;
        st.serialize_field("lambda_phi", &self.lambda_phi)?;
        st.serialize_field("rho", &self.rho)?;
        st.serialize_field("spectrum_moduli", &self.spectrum.iter().map(|z| z.norm()).collect::<Vec<_>>())?;
        st.serialize_field("inert", &self.inert)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("tol", &self.tol)?;
        st.end()
    }
}

/// `θ` of the canonical 0-ray ending at each state.
pub fn state_thetas(shift: &EdgeShift, dim: &DimensionData) -> Result<Vec<(Ray, Vec<Q>)>> {
    (0..shift.num_states())
        .map(|i| {
            let r = canonical_ray(shift, i).ok_or(Error::ReducibleInput)?;
            let th = theta(&Beam::single(r.clone()), shift, dim);
            Ok((r, th))
        })
        .collect()
}

/// Solves `Θ S = Y` exactly, with rows of `Θ` spanning the coordinate space.
fn solve_rows(theta: &QMatrix, y: &QMatrix) -> Result<QMatrix> {
    let tt = theta.transpose();
    let gram = tt.mul(theta);
    let inv = gram
        .inverse()
        .ok_or_else(|| Error::InconsistentSystem("state classes do not span the eventual range".into()))?;
    let s = inv.mul(&tt.mul(y));
    if theta.mul(&s) != *y {
        return Err(Error::InconsistentSystem("images of the state classes are not linearly consistent".into()));
    }
    Ok(s)
}

pub fn dimension_matrix(auto: &Automorphism, dim: &DimensionData, perron: &PerronData, tol: f64) -> Result<DimensionAction> {
    let shift = auto.shift();
    shift.require_standard()?;
    let states = state_thetas(shift, dim)?;
    let thetas: Vec<Vec<Q>> = states.iter().map(|(_, t)| t.clone()).collect();
    let mut images = Vec::with_capacity(states.len());
    for (ray, _) in &states {
        let beam = apply_automorphism_to_ray(auto, 1, ray)?;
        images.push(theta(&beam, shift, dim));
    }
    let s_phi = solve_rows(&QMatrix::from_rows(thetas), &QMatrix::from_rows(images))?;
    let d = dim.delta();
    if s_phi.mul(d) != d.mul(&s_phi) {
        return Err(Error::InconsistentSystem("S_phi does not commute with the shift action".into()));
    }
    action_from_matrix(s_phi, dim, perron, tol)
}

pub fn action_from_matrix(s_phi: QMatrix, dim: &DimensionData, perron: &PerronData, tol: f64) -> Result<DimensionAction> {
    let lambda_phi = lambda_phi_of(&s_phi, dim, perron)?;
    let cp = s_phi.char_poly();
    let spectrum = poly::distinct_roots(&cp);
    let rho = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let inert = s_phi.is_identity();
    let mut order = None;
    let mut p = s_phi.clone();
    for k in 1..=24u32 {
        if p.is_identity() {
            order = Some(k);
            break;
        }
        p = p.mul(&s_phi);
    }
    Ok(DimensionAction { s_phi, lambda_phi, rho, spectrum, inert, order, tol })
}

/// Rayleigh ratio of `S_φ` on the Perron eigendirection of `δ|_R`.
pub fn lambda_phi_of(s_phi: &QMatrix, dim: &DimensionData, perron: &PerronData) -> Result<f64> {
    let u = dim.perron_coords(&perron.left);
    let s = s_phi.to_f64_rows();
    let d = u.len();
    let us: Vec<f64> = (0..d).map(|j| (0..d).map(|i| u[i] * s[i][j]).sum()).collect();
    let num: f64 = us.iter().zip(&u).map(|(a, b)| a * b).sum();
    let den: f64 = u.iter().map(|x| x * x).sum();
    let ratio = num / den;
    if !(ratio > 0.0) {
        return Err(Error::NonPositiveRatio(ratio));
    }
    Ok(ratio)
}

/// `Σ_rays λ^{-m} v_r(t(y_m))`.
pub fn unstable_measure(beam: &Beam, shift: &EdgeShift, perron: &PerronData) -> f64 {
    let scale = perron.lambda.powi(-(beam.level as i32));
    beam.rays.iter().map(|r| scale * perron.right[r.end_state(shift)]).sum()
}

/// `θ · v_r`, which equals the unstable measure of the beam.
pub fn theta_pairing(theta_coords: &[Q], dim: &DimensionData, perron: &PerronData) -> f64 {
    let x = dim.embed(theta_coords);
    x.iter().zip(&perron.right).map(|(a, b)| q_to_f64(a) * b).sum()
}

/// Ray-count bound for `φⁿ(R(x,0))`: `P(A^-(n))` when `W^-(n,φ⁻¹) <= 0`,
/// else `P(A^+(n))`.
pub fn ray_count_bound(shift: &EdgeShift, w_minus: i64, w_minus_inv: i64) -> num_bigint::BigUint {
    let len = if w_minus_inv <= 0 { w_minus_inv.abs() - w_minus } else { w_minus.abs() - w_minus_inv };
    shift.count_words(len.max(0) as usize)
}

fn status_le(lhs: f64, lo: f64, hi: f64, tol: f64) -> Status {
    if lhs <= lo + tol {
        Status::Confirmed
    } else if lhs <= hi + tol {
        Status::Consistent
    } else {
        Status::Violated
    }
}

pub fn verify_entropy_bound(action: &DimensionAction, entropy_estimate: f64, tol: f64) -> Check {
    let lhs = action.lambda_phi.ln().abs();
    let status = if lhs <= entropy_estimate + tol { Status::Confirmed } else { Status::Inconclusive };
    Check::new("|log lambda_phi| <= h_top(phi)", status, tol).values(lhs, entropy_estimate)
}

fn to_f(x: &Q) -> f64 {
    q_to_f64(x)
}

/// Range of `(b - a) h + b L` with `a ∈ [a_lo, a_hi]`, `b ∈ [b_lo, b_hi]`,
/// `s = ±1` the sign in front of `a`.
fn linear_range(a: (f64, f64), b: (f64, f64), sign_a: f64, h: f64, l: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in [a.0, a.1] {
        for y in [b.0, b.1] {
            let v = (y + sign_a * x) * h + y * l;
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

/// Dimension action of `r*(φ)` on the transposed shift. The bounds in
/// `α^+` are proved for this action (through the reverse map).
pub fn reverse_action(auto: &Automorphism, tol: f64) -> Result<DimensionAction> {
    let (t, rev) = crate::coding_range::reverse_automorphism(auto)?;
    let dim = crate::eventual::dimension_data(&t)?;
    let perron = crate::perron::perron_data(&t, tol)?;
    dimension_matrix(&rev, &dim, &perron, tol)
}

/// The coding-range bounds and their corollaries. The `α^-` family bounds
/// `log ρ(S_φ)`; the `α^+` family bounds `log ρ(S_{r*φ})`, taken from
/// `reverse` (see [`reverse_action`]).
pub fn verify_main_bounds(
    shift: &EdgeShift,
    bounds: &LyapunovBounds,
    action: &DimensionAction,
    reverse: &DimensionAction,
    dim: &DimensionData,
    perron: &PerronData,
    tol: f64,
) -> Vec<Check> {
    let lhs = action.rho.ln();
    let lhs_rev = reverse.rho.ln();
    let h = perron.entropy;
    let l = dim.rho_minus().ln();
    let iv = |i: &crate::coding_range::Interval| (to_f(&i.lo), to_f(&i.hi));
    let am = iv(&bounds.alpha_minus);
    let ap = iv(&bounds.alpha_plus);
    let ami_abs = iv(&bounds.alpha_minus_inv.abs());
    let api_abs = iv(&bounds.alpha_plus_inv.abs());
    let mut out = Vec::new();

    let (lo, hi) = linear_range(am, ami_abs, -1.0, h, l);
    out.push(
        Check::new("log rho(S) <= (|a-(f^-1)| - a-(f)) h + |a-(f^-1)| log rho-", status_le(lhs, lo, hi, tol), tol)
            .values(lhs, lo)
            .detail(format!("rhs in [{lo:.12}, {hi:.12}], gap {:.3e}", lo - lhs)),
    );
    let (lo, hi) = linear_range(ap, api_abs, 1.0, h, l);
    out.push(
        Check::new("log rho(S_r*f) <= (|a+(f^-1)| + a+(f)) h + |a+(f^-1)| log rho-", status_le(lhs_rev, lo, hi, tol), tol)
            .values(lhs_rev, lo)
            .detail(format!("rhs in [{lo:.12}, {hi:.12}], gap {:.3e}", lo - lhs_rev)),
    );

    let zero = Q::zero();
    let ami = &bounds.alpha_minus_inv;
    if ami.lo > zero {
        let neg = if bounds.alpha_minus.hi < zero {
            Status::Confirmed
        } else if bounds.alpha_minus.lo < zero {
            Status::Consistent
        } else {
            Status::Violated
        };
        out.push(Check::new("a-(f^-1) > 0 implies a-(f) < 0", neg, 0.0));
        let (lo, hi) = (-am.1 * h, -am.0 * h);
        out.push(Check::new("log rho(S) <= -a-(f) h", status_le(lhs, lo, hi, tol), tol).values(lhs, lo));
    } else if ami.hi > zero {
        out.push(Check::new("a-(f^-1) > 0 implies a-(f) < 0", Status::Inconclusive, 0.0).detail("hypothesis undecided"));
    }
    let api = &bounds.alpha_plus_inv;
    if api.hi < zero {
        let pos = if bounds.alpha_plus.lo > zero {
            Status::Confirmed
        } else if bounds.alpha_plus.hi > zero {
            Status::Consistent
        } else {
            Status::Violated
        };
        out.push(Check::new("a+(f^-1) < 0 implies a+(f) > 0", pos, 0.0));
        let (lo, hi) = (ap.0 * h, ap.1 * h);
        out.push(Check::new("log rho(S_r*f) <= a+(f) h", status_le(lhs_rev, lo, hi, tol), tol).values(lhs_rev, lo));
    } else if api.lo < zero {
        out.push(Check::new("a+(f^-1) < 0 implies a+(f) > 0", Status::Inconclusive, 0.0).detail("hypothesis undecided"));
    }

    if shift.num_states() == 1 {
        // full shift: log rho- = -h, so the first bound reads -a-(f) h
        let (lo, hi) = (-am.1 * h, -am.0 * h);
        out.push(Check::new("full shift: log rho(S) <= -a-(f) h", status_le(lhs, lo, hi, tol), tol).values(lhs, lo));
    }

    let all_zero = [&bounds.alpha_minus, &bounds.alpha_plus, &bounds.alpha_minus_inv, &bounds.alpha_plus_inv]
        .iter()
        .all(|i| i.is_point() && i.lo.is_zero());
    if all_zero {
        out.push(unit_circle_check(action, tol));
    }
    out
}

fn unit_circle_check(action: &DimensionAction, tol: f64) -> Check {
    let worst = action.spectrum.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    Check::new("spectrum of S on the unit circle", if worst <= tol { Status::Confirmed } else { Status::Violated }, tol)
        .values(worst, 0.0)
}

/// Whether `log ρ(S_φ) = 0` and the spectrum lies on the unit circle.
pub fn distortion_spectrum_check(action: &DimensionAction, tol: f64) -> Vec<Check> {
    let lr = action.rho.ln();
    let on_circle = action.spectrum.iter().all(|z| (z.norm() - 1.0).abs() <= tol);
    vec![
        Check::new("log rho(S) = 0", if lr.abs() <= tol { Status::Confirmed } else { Status::Inconclusive }, tol).values(lr, 0.0),
        Check::new("spectrum on the unit circle", if on_circle { Status::Confirmed } else { Status::Inconclusive }, tol),
    ]
}

/// Every ray at level 0 through the given window ending at `state`, used by
/// tests comparing representatives.
pub fn rays_through(shift: &EdgeShift, state: State, cycle_len: usize) -> Vec<Ray> {
    let mut out = Vec::new();
    for w in admissible_words(shift, cycle_len) {
        let closes = shift.target(*w.last().expect("nonempty")) == shift.source(w[0]);
        if closes && shift.target(*w.last().expect("nonempty")) == state {
            out.push(Ray::normalized(0, w, vec![]));
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn q_one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::eventual::dimension_data;
    use crate::perron::{perron_data, DEFAULT_TOL};
    use crate::rational::q;

    #[test]
    fn ray_normal_form() {
        let r = Ray::normalized(0, vec![1, 1], vec![1, 0]);
        assert_eq!(r.cycle, vec![1]);
        assert_eq!(r.transient, vec![0]);
        assert_eq!(r.suffix_from(-3), vec![1, 1, 1, 0]);
    }

    #[test]
    fn full_two_theta() {
        let s = builtins::full_shift(2).unwrap();
        let dim = dimension_data(&s).unwrap();
        let r = canonical_ray(&s, 0).unwrap();
        assert_eq!(theta(&Beam::single(r.clone()), &s, &dim), vec![q(1)]);
        let b = refine_ray(&s, &r, 1).unwrap();
        assert_eq!(b.rays.len(), 2);
        assert_eq!(theta(&b, &s, &dim), vec![q(1)]);
    }

    #[test]
    fn golden_refinements() {
        let g = builtins::golden_mean();
        assert_eq!(refine_ray(&g, &canonical_ray(&g, 0).unwrap(), 1).unwrap().rays.len(), 2);
        assert_eq!(refine_ray(&g, &canonical_ray(&g, 1).unwrap(), 1).unwrap().rays.len(), 1);
    }

    #[test]
    fn shift_image_of_ray() {
        let s = builtins::full_shift(2).unwrap();
        let sigma = builtins::shift_map(s.clone()).unwrap();
        let r = canonical_ray(&s, 0).unwrap();
        let b = apply_automorphism_to_ray(&sigma, 1, &r).unwrap();
        assert_eq!(b.level, -1);
        assert_eq!(b.rays.len(), 1);
        let dim = dimension_data(&s).unwrap();
        assert_eq!(theta(&b, &s, &dim), vec![q(2)]);
    }

    #[test]
    fn vertex_swap_action() {
        let (b, phi) = builtins::vertex_swap_b().unwrap();
        let dim = dimension_data(&b).unwrap();
        let p = perron_data(&b, DEFAULT_TOL).unwrap();
        let r = canonical_ray(&b, 0).unwrap();
        let img = apply_automorphism_to_ray(&phi, 1, &r).unwrap();
        assert_eq!(img.level, 0);
        assert_eq!(img.rays.len(), 1);
        assert_eq!(img.rays[0].end_state(&b), 1);
        let act = dimension_matrix(&phi, &dim, &p, DEFAULT_TOL).unwrap();
        assert_eq!(act.s_phi, QMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
        assert!(!act.inert);
        assert_eq!(act.order, Some(2));
        assert!((act.lambda_phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shift_action_is_delta() {
        let g = builtins::golden_mean();
        let sigma = builtins::shift_map(g.clone()).unwrap();
        let dim = dimension_data(&g).unwrap();
        let p = perron_data(&g, DEFAULT_TOL).unwrap();
        let act = dimension_matrix(&sigma, &dim, &p, DEFAULT_TOL).unwrap();
        assert_eq!(&act.s_phi, dim.delta());
        assert!((act.lambda_phi - p.lambda).abs() < 1e-9);
    }
}
