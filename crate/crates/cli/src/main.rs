use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use sftlab_core::code::Automorphism;
use sftlab_core::coding_range::{coding_range_profile, lyapunov_bounds_from_profile};
use sftlab_core::dimension::{self, dimension_matrix};
use sftlab_core::entropy::{column_census_with_budget, exact_entropy};
use sftlab_core::report::{Check, Report};
use sftlab_core::spectra::{self, check_conditions, search_primitive_realization, IntPolynomial, SearchOutcome};
use sftlab_core::suite::{run_suite, SuiteOptions};
use sftlab_core::system::load_system;
use sftlab_core::words::DEFAULT_BUDGET;
use sftlab_core::{dimension_data, perron_data, Error, NonnegIntMatrix};

const BUDGET_ENV: &str = "SFTLAB_BUDGET";

#[derive(Parser)]
#[command(name = "sftlab", version, about = "Automorphisms of shifts of finite type: coding ranges, dimension representation, entropy bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the automorphisms of a system file.
    Analyze {
        file: PathBuf,
        /// Only this automorphism.
        #[arg(long)]
        auto: Option<String>,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        /// Half-width of the census columns.
        #[arg(long, default_value_t = 1)]
        w: usize,
        /// Number of iterates in the census.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Run a verification suite (acceptance, theorem-3 = entropy bound, theorem-4 = coding-range bounds, spectra, profile).
    Suite {
        name: String,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
        /// Polynomial for the spectra suite, descending coefficients.
        #[arg(long)]
        poly: Option<String>,
        /// Matrix file (JSON rows) used when the realization search finds nothing.
        #[arg(long)]
        eb_matrix: Option<PathBuf>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        tol: Option<f64>,
        /// Worker threads for the acceptance suite.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Spectral conditions and realization search for integer polynomials.
    Spectra {
        #[command(subcommand)]
        command: SpectraCommand,
    },
}

#[derive(Subcommand)]
enum SpectraCommand {
    Check {
        #[arg(long)]
        poly: String,
        #[arg(long = "N", default_value_t = spectra::DEFAULT_N)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    Search {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 8)]
        max_entry: u64,
        /// Candidate budget; accepts forms like 1e7.
        #[arg(long, default_value = "1e7")]
        budget: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Budget(String),
    Bug(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::WindowBudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::InternalInvariantViolation(_) => Failure::Bug(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn parse_count(s: &str) -> Result<u64, Failure> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() && v.fract() == 0.0 => Ok(v as u64),
        _ => Err(Failure::Input(format!("not a count: {s:?}"))),
    }
}

fn parse_poly(s: &str) -> Result<IntPolynomial, Failure> {
    let coeffs: Vec<i64> = serde_json::from_str(s).map_err(|e| Failure::Input(format!("--poly: {e}")))?;
    Ok(IntPolynomial::new(coeffs)?)
}

/// Budget from the environment, if set.
fn env_budget() -> Result<Option<u64>, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => parse_count(&v).map(Some),
        Err(_) => Ok(None),
    }
}

fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    std::fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn finish(report: &Report, env_override: bool, json: Option<&Path>) -> Result<ExitCode, Failure> {
    print!("{}", report.to_table());
    if env_override {
        println!("budget {} taken from {BUDGET_ENV}", report.budget.unwrap_or_default());
    }
    if let Some(path) = json {
        let mut v = serde_json::to_value(report).expect("reports serialize");
        if env_override {
            v["budget_source"] = json!(BUDGET_ENV);
        }
        write_json(path, &v)?;
    }
    Ok(if report.has_violation() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn analyze_one(name: &str, auto: &Automorphism, n_max: u32, w: usize, steps: usize, tol: f64, budget: u64, timings: bool) -> Result<(Vec<Check>, Value), Failure> {
    let start = Instant::now();
    let shift = auto.shift();
    let perron = perron_data(shift, tol)?;
    let dim = dimension_data(shift)?;
    let profile = coding_range_profile(name, auto, n_max, budget)?;
    let bounds = lyapunov_bounds_from_profile(auto, &profile, budget)?;
    let action = dimension_matrix(auto, &dim, &perron, tol)?;
    let reverse = dimension::reverse_action(auto, tol)?;
    let mut checks = Vec::new();
    let fails = profile.invariant_failures();
    checks.push(Check::assert("coding range invariants", fails.is_empty(), 0.0).detail(fails.join("; ")));
    checks.extend(dimension::verify_main_bounds(shift, &bounds, &action, &reverse, &dim, &perron, tol));
    let (h, how) = match exact_entropy(auto)? {
        Some(h) => (h, "exact".to_string()),
        None => {
            let c = column_census_with_budget(auto, w, steps, budget)?;
            (c.estimate, format!("census w={w} n={steps}"))
        }
    };
    checks.push(dimension::verify_entropy_bound(&action, h, tol).detail(format!("entropy {how}")));
    let ms = start.elapsed().as_millis() as u64;
    for c in &mut checks {
        c.name = format!("{name}: {}", c.name);
        if timings {
            c.runtime_ms = Some(ms);
        }
    }
    let data = json!({
        "name": name,
        "entropy_of_shift": perron.entropy,
        "lambda_A": perron.lambda,
        "rho_minus": dim.rho_minus(),
        "profile": profile,
        "lyapunov": bounds,
        "dimension_action": action,
        "entropy_estimate": {"value": h, "method": how},
    });
    Ok((checks, data))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let env = env_budget()?;
    match cli.command {
        Command::Analyze { file, auto, n_max, w, steps, tol, json, timings } => {
            let system = load_system(&file)?;
            let tol = tol.unwrap_or(system.tol);
            let budget = env.unwrap_or(system.budget);
            let names: Vec<&String> = match &auto {
                Some(a) => {
                    if !system.automorphisms.contains_key(a) {
                        return Err(Failure::Input(format!("no automorphism named {a:?} in {}", file.display())));
                    }
                    vec![a]
                }
                None => system.automorphisms.keys().collect(),
            };
            let mut checks = Vec::new();
            let mut data = Vec::new();
            for name in names {
                let (c, d) = analyze_one(name, &system.automorphisms[name], n_max, w, steps, tol, budget, timings)?;
                checks.extend(c);
                data.push(d);
            }
            let mut report = Report::new(format!("analyze {}", file.display()), checks);
            report.budget = Some(budget);
            report.data = Some(json!({ "shift": system.shift.matrix().rows(), "automorphisms": data }));
            finish(&report, env.is_some(), json.as_deref())
        }
        Command::Suite { name, json, timings, poly, eb_matrix, n_max, tol, workers } => {
            let mut opts = SuiteOptions { timings, workers, budget: env.unwrap_or(DEFAULT_BUDGET), ..SuiteOptions::default() };
            if let Some(p) = poly {
                opts.poly = parse_poly(&p)?;
            }
            if let Some(path) = eb_matrix {
                let text = std::fs::read_to_string(&path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                let rows: Vec<Vec<i64>> = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                opts.eb_matrix = Some(NonnegIntMatrix::from_signed(&rows)?);
            }
            if let Some(n) = n_max {
                opts.n_max = n;
            }
            if let Some(t) = tol {
                opts.tol = t;
            }
            let report = run_suite(&name, &opts)?;
            finish(&report, env.is_some(), json.as_deref())
        }
        Command::Spectra { command } => match command {
            SpectraCommand::Check { poly, n, tol, json } => {
                let p = parse_poly(&poly)?;
                let r = check_conditions(&p, n, tol)?;
                let v = serde_json::to_value(&r).expect("reports serialize");
                println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
                if let Some(path) = json {
                    write_json(&path, &v)?;
                }
                Ok(ExitCode::SUCCESS)
            }
            SpectraCommand::Search { poly, max_size, max_entry, budget, json } => {
                let p = parse_poly(&poly)?;
                let budget = parse_count(&budget)?;
                let out = search_primitive_realization(&p, max_size, max_entry, budget)?;
                let v = match &out {
                    SearchOutcome::Found { matrix, stage, candidates } => json!({"found": true, "matrix": matrix, "stage": stage, "candidates": candidates}),
                    SearchOutcome::NotFound { candidates } => json!({"found": false, "candidates": candidates}),
                };
                println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
                if let Some(path) = json {
                    write_json(&path, &v)?;
                }
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exceeded: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Bug(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
    }
}
