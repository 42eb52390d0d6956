//! Verification suites run by the CLI.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builtins::{self, Completion};
use crate::code::{verify_automorphism, Automorphism, SlidingBlockCode};
use crate::coding_range::{self, coding_range_profile, lyapunov_bounds_with_budget, reverse_automorphism, w_values_with_budget, Interval};
use crate::dimension::{self, canonical_ray, dimension_matrix, refine_ray, theta, unstable_measure, Beam};
use crate::entropy::{column_census_with_budget, exact_entropy, Subsystem};
use crate::error::{Error, Result};
use crate::eventual::dimension_data;
use crate::matrix::NonnegIntMatrix;
use crate::perron::{perron_data, DEFAULT_TOL};
use crate::rational::{q, Q};
use crate::report::{Check, Report, Status};
use crate::shift::{EdgeId, EdgeShift};
use crate::spectra::{self, check_conditions, search_primitive_realization, verify_eb_failure, Condition, EbOutcome, IntPolynomial};
use crate::words::{admissible_words, DEFAULT_BUDGET};

pub const SUITES: [&str; 5] = ["acceptance", "theorem-3", "theorem-4", "spectra", "profile"];
pub const CUBIC: [i64; 4] = [1, -5, -6, 1];
pub const ORACLE_SEED: u64 = 12;
pub const ORACLE_CASES: usize = 500;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub budget: u64,
    pub tol: f64,
    pub n_max: u32,
    pub poly: IntPolynomial,
    pub net_trace_n: usize,
    /// Realization used when the search returns NotFound.
    pub eb_matrix: Option<NonnegIntMatrix>,
    pub timings: bool,
    /// Threads used by the acceptance suite; results are collected in criterion order.
    pub workers: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            tol: DEFAULT_TOL,
            n_max: 4,
            poly: IntPolynomial::new(CUBIC.to_vec()).expect("monic"),
            net_trace_n: spectra::DEFAULT_N,
            eb_matrix: None,
            timings: false,
            workers: 1,
        }
    }
}

fn within(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Check {
    Check::assert(name, (lhs - rhs).abs() <= tol, tol).values(lhs, rhs)
}

fn exact(name: impl Into<String>, ok: bool) -> Check {
    Check::assert(name, ok, 0.0)
}

fn iv(i: &Interval) -> String {
    format!("[{}, {}]", crate::rational::q_to_string(&i.lo), crate::rational::q_to_string(&i.hi))
}

fn failed(name: &str, e: &Error) -> Check {
    Check::new(name, Status::Violated, 0.0).detail(format!("error: {e}"))
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Report> {
    let checks = match name {
        "acceptance" => acceptance(opts),
        "theorem-3" => entropy_bound_suite(opts)?,
        "theorem-4" => main_bounds_suite(opts)?,
        "spectra" => spectra_suite(opts)?,
        "profile" => {
            let (_, tau) = builtins::tau_golden()?;
            let p = coding_range_profile("tau_golden", &tau, opts.n_max, opts.budget)?;
            let fails = p.invariant_failures();
            let checks = vec![exact("profile invariants", fails.is_empty()).detail(fails.join("; "))];
            let mut report = Report::new(name, checks);
            report.data = Some(serde_json::to_value(&p).expect("profile serializes"));
            report.budget = Some(opts.budget);
            return Ok(report);
        }
        _ => return Err(Error::PreconditionFailed(format!("unknown suite {name:?}, expected one of {SUITES:?}"))),
    };
    let mut report = Report::new(name, checks);
    report.budget = Some(opts.budget);
    Ok(report)
}

type Criterion = fn(&SuiteOptions) -> Result<Vec<Check>>;

pub const CRITERIA: [(&str, Criterion); 12] = [
    ("golden mean entropy", criterion_1),
    ("shift sharpness", criterion_2),
    ("tau example", criterion_3),
    ("entropy-bound examples", criterion_4),
    ("non-inert finite order", criterion_5),
    ("sum inequalities and reverse identity", criterion_6),
    ("cubic counterexample", criterion_7),
    ("dimension-representation functoriality", criterion_8),
    ("measure coherence", criterion_9),
    ("five-symbol example", criterion_10),
    ("unit-circle instances", criterion_11),
    ("oracle equivalence", criterion_12),
];

/// Runs one criterion, prefixing check names with its number.
pub fn run_criterion(index: usize, opts: &SuiteOptions) -> Vec<Check> {
    let (title, f) = CRITERIA[index];
    let label = format!("C{} {}", index + 1, title);
    let start = Instant::now();
    let mut checks = match f(opts) {
        Ok(c) => c,
        Err(e) => vec![failed("evaluation", &e)],
    };
    let ms = start.elapsed().as_millis() as u64;
    for c in &mut checks {
        c.name = format!("{label}: {}", c.name);
        if opts.timings {
            c.runtime_ms = Some(ms);
        }
    }
    checks
}

fn acceptance(opts: &SuiteOptions) -> Vec<Check> {
    let workers = opts.workers.clamp(1, CRITERIA.len());
    if workers == 1 {
        return (0..CRITERIA.len()).flat_map(|i| run_criterion(i, opts)).collect();
    }
    let mut slots: Vec<Vec<Check>> = vec![Vec::new(); CRITERIA.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let done = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= CRITERIA.len() {
                    break;
                }
                let checks = run_criterion(i, opts);
                done.lock().expect("no worker panics").push((i, checks));
            });
        }
    });
    for (i, checks) in done.into_inner().expect("no worker panics") {
        slots[i] = checks;
    }
    slots.into_iter().flatten().collect()
}

pub fn criterion_1(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let g = builtins::golden_mean();
    let p = perron_data(&g, opts.tol)?;
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    Ok(vec![
        within("h_top = log golden ratio", p.entropy, golden.ln(), 1e-9),
        exact("P(0) = 1", g.count_words(0) == 1u32.into()),
        exact("P(2) = 5", g.count_words(2) == 5u32.into()),
    ])
}

fn main_bounds_for(auto: &Automorphism, opts: &SuiteOptions) -> Result<(coding_range::LyapunovBounds, dimension::DimensionAction, Vec<Check>)> {
    let shift = auto.shift();
    let bounds = lyapunov_bounds_with_budget(auto, opts.n_max, opts.budget)?;
    let dim = dimension_data(shift)?;
    let perron = perron_data(shift, opts.tol)?;
    let action = dimension_matrix(auto, &dim, &perron, opts.tol)?;
    let reverse = dimension::reverse_action(auto, opts.tol)?;
    let checks = dimension::verify_main_bounds(shift, &bounds, &action, &reverse, &dim, &perron, opts.tol);
    Ok((bounds, action, checks))
}

fn all_confirmed(checks: &[Check], what: &str) -> Check {
    let bad: Vec<&str> = checks.iter().filter(|c| c.status != Status::Confirmed).map(|c| c.name.as_str()).collect();
    exact(format!("{what} all Confirmed"), bad.is_empty()).detail(if bad.is_empty() { String::new() } else { format!("not confirmed: {}", bad.join("; ")) })
}

pub fn criterion_2(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let s = builtins::full_shift(2)?;
    let sigma = builtins::shift_map(s)?;
    let mut out = Vec::new();
    for n in 1..=4u32 {
        let w = w_values_with_budget(&sigma, n, opts.budget)?;
        out.push(exact(format!("W-({n}) = W+({n}) = -{n}"), w.minus == -(n as i64) && w.plus == -(n as i64)));
    }
    let (bounds, action, main) = main_bounds_for(&sigma, opts)?;
    let minus_one = Interval::point(q(-1));
    out.push(exact("alpha- interval = [-1,-1]", bounds.alpha_minus == minus_one).detail(iv(&bounds.alpha_minus)));
    out.push(exact("alpha+ interval = [-1,-1]", bounds.alpha_plus == minus_one).detail(iv(&bounds.alpha_plus)));
    out.push(within("lambda_phi = 2", action.lambda_phi, 2.0, 1e-9));
    out.push(within("rho(S_phi) = 2", action.rho, 2.0, 1e-9));
    let first = &main[0];
    let gap = first.rhs.unwrap_or(f64::NAN) - first.lhs.unwrap_or(f64::NAN);
    out.push(Check::assert("first bound holds with equality", first.status == Status::Confirmed && gap.abs() <= 1e-9, 1e-9).values(first.lhs.unwrap_or(f64::NAN), first.rhs.unwrap_or(f64::NAN)));
    out.push(all_confirmed(&main, "main bounds"));
    Ok(out)
}

pub fn criterion_3(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let (_, tau) = builtins::tau_golden()?;
    let (bounds, action, main) = main_bounds_for(&tau, &SuiteOptions { n_max: 4, ..opts.clone() })?;
    let lambda = perron_data(&builtins::golden_mean(), opts.tol)?.lambda;
    Ok(vec![
        exact("alpha-(tau) = [0,0]", bounds.alpha_minus == Interval::point(q(0))).detail(iv(&bounds.alpha_minus)),
        exact("alpha-(tau^-1) = [-1,-1]", bounds.alpha_minus_inv == Interval::point(q(-1))).detail(iv(&bounds.alpha_minus_inv)),
        within("log rho(S_tau) = log lambda_A", action.rho.ln(), lambda.ln(), 1e-6),
        all_confirmed(&main, "main bounds"),
    ])
}

pub fn criterion_4(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let (s, phi) = builtins::sigma_x_sigma_inv()?;
    let dim = dimension_data(&s)?;
    let perron = perron_data(&s, opts.tol)?;
    let action = dimension_matrix(&phi, &dim, &perron, opts.tol)?;
    let census = column_census_with_budget(&phi, 2, 6, opts.budget)?;
    let bound = dimension::verify_entropy_bound(&action, census.estimate, opts.tol);
    let log4 = 4f64.ln();
    Ok(vec![
        within("lambda_phi = 1", action.lambda_phi, 1.0, 1e-9),
        Check::assert("census(w=2, n=6) >= log 4", census.estimate >= log4 - 1e-9, 1e-9)
            .values(census.estimate, log4)
            .detail(format!("count {} via {:?}", census.count, census.method)),
        exact("entropy bound Confirmed", bound.status == Status::Confirmed),
    ])
}

pub fn criterion_5(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let (b, phi) = builtins::vertex_swap_b()?;
    let dim = dimension_data(&b)?;
    let perron = perron_data(&b, opts.tol)?;
    let action = dimension_matrix(&phi, &dim, &perron, opts.tol)?;
    let swap = crate::rational::QMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
    let spectral = dimension::distortion_spectrum_check(&action, 1e-9);
    Ok(vec![
        exact("S_phi = [[0,1],[1,0]]", action.s_phi == swap).detail(format!("{:?}", action.s_phi.to_string_rows())),
        exact("S_phi^2 = I", action.s_phi.pow(2).is_identity()),
        exact("not inert", !action.inert),
        within("lambda_phi = 1", action.lambda_phi, 1.0, 1e-9),
        exact("spectrum on the unit circle", spectral[1].status == Status::Confirmed),
    ])
}

pub fn criterion_6(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, _, auto) in builtins::catalog()? {
        let (_, rev) = reverse_automorphism(&auto)?;
        let mut sums = true;
        let mut reverse = true;
        let mut detail = Vec::new();
        for n in 1..=3u32 {
            let w = w_values_with_budget(&auto, n, opts.budget)?;
            let r = w_values_with_budget(&rev, n, opts.budget)?;
            if w.minus + w.minus_inv > 0 || w.plus + w.plus_inv < 0 {
                sums = false;
                detail.push(format!("n={n}: {w:?}"));
            }
            if r.minus != -w.plus {
                reverse = false;
                detail.push(format!("n={n}: W-(r*f) = {} but W+(f) = {}", r.minus, w.plus));
            }
        }
        out.push(exact(format!("{name}: sum inequalities"), sums).detail(detail.join("; ")));
        out.push(exact(format!("{name}: W-(n, r*f) = -W+(n, f)"), reverse));
    }
    Ok(out)
}

pub fn criterion_7(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = IntPolynomial::new(CUBIC.to_vec())?;
    let r = check_conditions(&p, opts.net_trace_n, opts.tol)?;
    let lambda_d = r.lambda_d;
    let mut out = vec![
        exact("tr_1 = 5, tr_2 = 37", r.traces[0] == 5.into() && r.traces[1] == 37.into()),
        exact("net trace at n=2 = 32", r.net_traces[1] == 32.into()),
        exact(format!("net traces >= 0 for n <= {}", r.n_checked), r.net_trace == Condition::Pass),
        Check::assert("Perron root in (5.9, 6.0)", r.perron == Condition::Pass && lambda_d > 5.9 && lambda_d < 6.0, opts.tol).values(lambda_d, 6.0),
        Check::assert("min-modulus reciprocal > Perron root", r.reciprocal == Condition::Pass, opts.tol).values(1.0 / r.min_modulus_root, lambda_d),
    ];
    let found = search_primitive_realization(&p, 6, 8, spectra::DEFAULT_SEARCH_BUDGET)?;
    let m = match (found.matrix(), &opts.eb_matrix) {
        (Some(m), _) => Some((m.clone(), "search")),
        (None, Some(m)) => Some((m.clone(), "supplied")),
        (None, None) => None,
    };
    match m {
        Some((m, origin)) => {
            let traces = spectra::matrix_traces(&m, m.size());
            let poly_traces = spectra::power_traces(&p, m.size());
            out.push(exact(format!("realization ({origin}) has char poly t^m p(t)"), traces == poly_traces).detail(format!("{:?}", m.rows())));
            let eb = verify_eb_failure(&m, opts.tol)?;
            out.push(Check::assert("EB failure Confirmed with positive gap", eb.outcome == EbOutcome::Confirmed && eb.gap > 0.0, opts.tol).values(eb.log_rho_delta_inv, eb.log_lambda).detail(format!("gap {:.9}", eb.gap)));
        }
        None => out.push(Check::new("realization search", Status::Inconclusive, 0.0).detail("NotFound within budget and no matrix supplied")),
    }
    Ok(out)
}

pub fn criterion_8(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, shift, auto) in builtins::catalog()? {
        let dim = dimension_data(&shift)?;
        let perron = perron_data(&shift, opts.tol)?;
        let s1 = dimension_matrix(&auto, &dim, &perron, opts.tol)?.s_phi;
        let s2 = dimension_matrix(&auto.pow_with_budget(2, opts.budget)?, &dim, &perron, opts.tol)?.s_phi;
        let si = dimension_matrix(&auto.inverse(), &dim, &perron, opts.tol)?.s_phi;
        out.push(exact(format!("{name}: S(f^2) = S(f)^2"), s2 == s1.mul(&s1)));
        out.push(exact(format!("{name}: S(f^-1) = S(f)^-1"), s1.mul(&si).is_identity()));
        out.push(exact(format!("{name}: S(f) commutes with delta"), s1.mul(dim.delta()) == dim.delta().mul(&s1)));
        let mut level_ok = true;
        for state in 0..shift.num_states() {
            let r = canonical_ray(&shift, state).ok_or(Error::ReducibleInput)?;
            let t0 = theta(&Beam::single(r.clone()), &shift, &dim);
            for lvl in 1..=4 {
                level_ok &= theta(&refine_ray(&shift, &r, lvl)?, &shift, &dim) == t0;
            }
        }
        out.push(exact(format!("{name}: theta invariant under refinement to 4 levels"), level_ok));
    }
    Ok(out)
}

pub fn criterion_9(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, shift, auto) in builtins::catalog()? {
        let dim = dimension_data(&shift)?;
        let perron = perron_data(&shift, opts.tol)?;
        let action = dimension_matrix(&auto, &dim, &perron, opts.tol)?;
        let mut worst_ratio: f64 = 0.0;
        let mut worst_pair: f64 = 0.0;
        for state in 0..shift.num_states() {
            let r = canonical_ray(&shift, state).ok_or(Error::ReducibleInput)?;
            let u = Beam::single(r.clone());
            let img = dimension::apply_automorphism_to_ray(&auto, 1, &r)?;
            let ratio = unstable_measure(&img, &shift, &perron) / unstable_measure(&u, &shift, &perron);
            worst_ratio = worst_ratio.max((ratio - action.lambda_phi).abs());
            for b in [&u, &img] {
                let m = unstable_measure(b, &shift, &perron);
                let p = dimension::theta_pairing(&theta(b, &shift, &dim), &dim, &perron);
                worst_pair = worst_pair.max((m - p).abs());
            }
        }
        out.push(Check::assert(format!("{name}: measure ratio = lambda_phi"), worst_ratio <= 1e-6, 1e-6).values(worst_ratio, 0.0));
        out.push(Check::assert(format!("{name}: measure = theta . v_r"), worst_pair <= 1e-9, 1e-9).values(worst_pair, 0.0));
    }
    Ok(out)
}

/// What one completion of the five-symbol table yields.
#[derive(Clone, Debug, Serialize)]
pub struct FiveSymbolOutcome {
    pub completion: Completion,
    pub restriction_is_product: bool,
    pub lower_bound: Option<f64>,
    /// `Ok` when the full code certifies as an automorphism, else the reason.
    pub automorphism: std::result::Result<(), String>,
}

/// Restricts the five-symbol code to the c-free edges, identifies the
/// restriction with `σ × σ⁻¹` (symbol `(a,b)` is product edge `2a + b`),
/// and reads off its exact entropy.
pub fn five_symbol_analysis(completion: &Completion) -> Result<FiveSymbolOutcome> {
    let code = builtins::five_symbol_code(completion)?;
    let sub = Subsystem::new(code.source(), &[0, 1, 2, 3])?;
    let restricted = sub.restrict_code(&code)?;
    let (_, product) = builtins::sigma_x_sigma_inv()?;
    let restriction_is_product = restricted.same_map(product.forward());
    let mut lower_bound = None;
    if restriction_is_product {
        let f2 = builtins::full_shift(2)?;
        let fs = EdgeShift::new(sub.shift.matrix().clone())
            .with_factors(f2.clone(), f2)
            .ok_or_else(|| Error::InternalInvariantViolation("c-free part is not the full-2 square".into()))?;
        let fs = Arc::new(fs);
        let rebuild = |c: &SlidingBlockCode| SlidingBlockCode::from_fn(fs.clone(), fs.clone(), c.memory(), c.anticipation(), |w| c.rule(w));
        let auto = verify_automorphism(&rebuild(&restricted)?, &rebuild(product.inverse_code())?)?;
        lower_bound = exact_entropy(&auto)?;
    }
    let mut seen = [false; 5];
    let injective = completion.iter().all(|&e| !std::mem::replace(&mut seen[e as usize], true));
    let automorphism = if !injective {
        Err("c(a,b)c windows collide, the map is not injective".to_string())
    } else if completion.contains(&builtins::FIVE_C) {
        Err("a c(a,b)c window maps to c, colliding with the all-c point".to_string())
    } else {
        builtins::five_symbol(completion).map(|_| ()).map_err(|e| e.to_string())
    };
    Ok(FiveSymbolOutcome { completion: *completion, restriction_is_product, lower_bound, automorphism })
}

pub fn criterion_10(_opts: &SuiteOptions) -> Result<Vec<Check>> {
    let log4 = 4f64.ln();
    let mut all_product = true;
    let mut all_bound = true;
    let mut certified = Vec::new();
    let completions = builtins::all_completions();
    for c in &completions {
        let o = five_symbol_analysis(c)?;
        all_product &= o.restriction_is_product;
        all_bound &= o.lower_bound.is_some_and(|h| (h - log4).abs() <= 1e-9);
        if o.automorphism.is_ok() {
            certified.push(format!("{:?}", c));
        }
    }
    Ok(vec![
        exact(format!("c-free restriction = sigma x sigma^-1 for all {} completions", completions.len()), all_product),
        exact("certified lower bound h_top >= log 4 for every completion", all_bound),
        Check::new("completions certifying as automorphisms", Status::Confirmed, 0.0)
            .detail(format!("{} of {}: {}", certified.len(), completions.len(), certified.join(" "))),
    ])
}

pub fn criterion_11(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let g = builtins::golden_mean();
    let (_, swap) = builtins::vertex_swap_b()?;
    let mut out = Vec::new();
    for (name, auto) in [("identity", builtins::identity(g)), ("vertex_swap_B", swap)] {
        let (bounds, action, _) = main_bounds_for(&auto, opts)?;
        let zero = Interval::point(Q::from_integer(0.into()));
        let all_zero = [&bounds.alpha_minus, &bounds.alpha_plus, &bounds.alpha_minus_inv, &bounds.alpha_plus_inv].iter().all(|i| **i == zero);
        out.push(exact(format!("{name}: alpha intervals [0,0]"), all_zero));
        let worst = action.spectrum.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
        out.push(Check::assert(format!("{name}: |eigenvalues of S| = 1"), worst <= 1e-9, 1e-9).values(worst, 0.0));
    }
    Ok(out)
}

/// Small systems for the oracle comparison (at most four edges each).
pub fn oracle_systems() -> Vec<Arc<EdgeShift>> {
    [vec![vec![2]], vec![vec![1, 1], vec![1, 0]], vec![vec![3]], vec![vec![4]], vec![vec![1, 1], vec![1, 1]], vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]]
        .into_iter()
        .map(|m| Arc::new(EdgeShift::from_rows(m).expect("valid")))
        .collect()
}

/// A random code from `source` into the full shift on `out` symbols whose
/// output depends only on a random subset of the window positions.
pub fn random_code(rng: &mut ChaCha8Rng, source: &Arc<EdgeShift>, out: u64, memory: usize, anticipation: usize) -> Result<SlidingBlockCode> {
    let target = builtins::full_shift(out)?;
    let window = memory + anticipation + 1;
    let used: Vec<bool> = (0..window).map(|_| rng.gen_bool(0.5)).collect();
    let mut outputs: std::collections::BTreeMap<Vec<EdgeId>, EdgeId> = Default::default();
    let pairs: Vec<(Vec<EdgeId>, EdgeId)> = admissible_words(source, window)
        .into_iter()
        .map(|w| {
            let key: Vec<EdgeId> = w.iter().zip(&used).map(|(&e, &u)| if u { e } else { EdgeId::MAX }).collect();
            let o = *outputs.entry(key).or_insert_with(|| rng.gen_range(0..out) as EdgeId);
            (w, o)
        })
        .collect();
    SlidingBlockCode::from_pairs(source.clone(), target, memory, anticipation, &pairs)
}

/// Largest word count the naive decider is asked to enumerate.
pub const ORACLE_WORD_CAP: u64 = 300_000;

/// `(cases, discrepancies)` between the product-graph and naive deciders,
/// on codes with windows of length at most 7.
pub fn oracle_comparison(seed: u64, cases: usize) -> Result<(usize, Vec<String>)> {
    let systems = oracle_systems();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut case = 0;
    while case < cases {
        let src = &systems[rng.gen_range(0..systems.len())];
        let memory = rng.gen_range(0..=6usize);
        let anticipation = rng.gen_range(0..=6 - memory);
        let span = (memory + anticipation) as i64 + 2;
        let j = rng.gen_range(-span..=span);
        let len = ((j + anticipation as i64).max(0) - (j - memory as i64).min(0) + 1) as usize;
        if src.count_words(len) > ORACLE_WORD_CAP.into() {
            continue;
        }
        let out = rng.gen_range(2..=4u64);
        let code = random_code(&mut rng, src, out, memory, anticipation)?;
        let (fm, nm) = (coding_range::coded_minus(&code, j), coding_range::naive::coded_minus(&code, j));
        let (fp, np) = (coding_range::coded_plus(&code, j), coding_range::naive::coded_plus(&code, j));
        if fm != nm || fp != np {
            bad.push(format!("case {case}: m={memory} a={anticipation} j={j}: minus {fm}/{nm}, plus {fp}/{np}"));
        }
        case += 1;
    }
    Ok((cases, bad))
}

pub fn criterion_12(_opts: &SuiteOptions) -> Result<Vec<Check>> {
    let (cases, bad) = oracle_comparison(ORACLE_SEED, ORACLE_CASES)?;
    Ok(vec![exact(format!("{cases} random (code, j) cases agree"), bad.is_empty()).detail(bad.join("; "))])
}

fn entropy_bound_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, shift, auto) in builtins::catalog()? {
        let start = Instant::now();
        let dim = dimension_data(&shift)?;
        let perron = perron_data(&shift, opts.tol)?;
        let action = dimension_matrix(&auto, &dim, &perron, opts.tol)?;
        let (h, how) = match exact_entropy(&auto)? {
            Some(h) => (h, "exact"),
            None => (column_census_with_budget(&auto, 1, 3, opts.budget)?.estimate, "census w=1 n=3"),
        };
        let mut c = dimension::verify_entropy_bound(&action, h, opts.tol);
        c.name = format!("{name}: {}", c.name);
        c.detail = format!("entropy {how}");
        if opts.timings {
            c.runtime_ms = Some(start.elapsed().as_millis() as u64);
        }
        out.push(c);
    }
    Ok(out)
}

fn main_bounds_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, _, auto) in builtins::catalog()? {
        let start = Instant::now();
        let (_, _, checks) = main_bounds_for(&auto, opts)?;
        for mut c in checks {
            c.name = format!("{name}: {}", c.name);
            if opts.timings {
                c.runtime_ms = Some(start.elapsed().as_millis() as u64);
            }
            out.push(c);
        }
    }
    Ok(out)
}

fn spectra_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let r = check_conditions(&opts.poly, opts.net_trace_n, opts.tol)?;
    let cond = |c: Condition| match c {
        Condition::Pass => Status::Confirmed,
        Condition::Fail => Status::Violated,
        Condition::Indeterminate => Status::Indeterminate,
    };
    let mut out = vec![
        Check::new("(1) Perron root", cond(r.perron), opts.tol).values(r.lambda_d, r.perron_margin),
        Check::new(format!("(2) net traces >= 0 for n <= {}", r.n_checked), cond(r.net_trace), 0.0)
            .detail(r.net_traces.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        Check::new("(3) min-modulus reciprocal > Perron root", cond(r.reciprocal), opts.tol).values(1.0 / r.min_modulus_root, r.lambda_d),
    ];
    // a failed condition describes the polynomial; it is not a bug
    for c in &mut out {
        if c.status == Status::Violated {
            c.status = Status::Inconclusive;
        }
    }
    for (name, shift, _) in builtins::catalog()? {
        let tr = spectra::matrix_traces(shift.matrix(), opts.net_trace_n);
        let ok = spectra::net_traces(&tr).iter().all(|x| x.sign() != num_bigint::Sign::Minus);
        out.push(exact(format!("{name}: matrix net traces >= 0"), ok));
    }
    if r.realizable_conditions() {
        let found = search_primitive_realization(&opts.poly, 6, 8, spectra::DEFAULT_SEARCH_BUDGET)?;
        let m = found.matrix().cloned().or_else(|| opts.eb_matrix.clone());
        match m {
            Some(m) => {
                let eb = verify_eb_failure(&m, opts.tol)?;
                let status = match eb.outcome {
                    EbOutcome::Confirmed => Status::Confirmed,
                    EbOutcome::NotStrict => Status::NotStrict,
                    EbOutcome::NotFailure => Status::Inconclusive,
                };
                out.push(Check::new("EB failure for sigma^-1", status, opts.tol).values(eb.log_rho_delta_inv, eb.log_lambda).detail(format!("matrix {:?}, gap {:.9}", m.rows(), eb.gap)));
            }
            None => out.push(Check::new("realization search", Status::Inconclusive, 0.0).detail("NotFound")),
        }
    }
    Ok(out)
}
