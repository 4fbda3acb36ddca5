//! Command-line front end: identity-verification suites, operator tables,
//! BVP solves, convergence studies, direct minimization, Noether checks,
//! mountain-pass runs, and the coherence diagram.
//!
//! Conventions shared by all subcommands:
//!
//! - exit 0 on success, 1 on computation failure (e.g. mountain-pass
//!   geometry not found), 2 on usage errors (reported to standard error);
//! - with `--json` the full report, including the resolved configuration
//!   and seed, is printed to standard output as UTF-8 JSON with stable key
//!   order, so identical invocations produce byte-identical output;
//!   without it a one-line summary is printed instead;
//! - `--out` writes the command's primary grid result as CSV (header
//!   `t,value`) when the path ends in `.csv`, and the JSON report
//!   otherwise; partially written files are removed on failure;
//! - `--f` accepts either a path to a CSV file (header `t,value`, nodes of
//!   the uniform grid) or an arithmetic expression in `t`;
//! - `--lagrangian` accepts a catalog name (`dirichlet`, `linear-forced`,
//!   `double-well`, `power`) or an expression in `x`, `y`, `t` whose
//!   partials are taken by central differences;
//! - `--symmetry` accepts a catalog name (`translation`,
//!   `tempered-translation`, `scaling`) or a pair of expressions
//!   `xi-expr;eta-expr` in `s`, `x`, `t`;
//! - `TEMPVAR_THREADS` caps internal parallelism; the current
//!   implementation is serial, so the value is validated and recorded in
//!   the output but does not change the computation.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::expr::{Bindings, Expr};
use crate::fnspace::{norm, BasisSet, SpaceElement};
use crate::grid::{GridFunction, TemperedParams};
use crate::variational::LagrangianSpec;
use crate::{bvp, mountain_pass, noether, tempered_ops, variational};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tempvar",
    version,
    about = "Tempered fractional operators and the variational calculus built on them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the operator identities (annihilation, composition,
    /// integration by parts, operator-norm bound) at the given parameters
    OpsVerify(CommonArgs),
    /// Tabulate the tempered integrals and Caputo derivatives of an input
    /// function on the grid
    OpsTable(CommonArgs),
    /// Solve the linear tempered boundary value problem with forcing --f
    BvpSolve(CommonArgs),
    /// Manufactured-solution convergence study for the linear BVP
    BvpConverge(CommonArgs),
    /// Minimize the action of --lagrangian from a random start
    Minimize(CommonArgs),
    /// Invariance, necessary-condition, and conserved-quantity diagnostics
    /// for --lagrangian under --symmetry along a trajectory --f
    NoetherCheck(CommonArgs),
    /// Verify the mountain-pass geometry of --lagrangian and locate a
    /// saddle-type critical point
    MountainPass(CommonArgs),
    /// Evaluate the conserved quantity at (α,σ), (α,0), and (1,0) through
    /// the same code path and report the specialization gaps
    Coherence(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::OpsVerify(_) => "ops-verify",
            Command::OpsTable(_) => "ops-table",
            Command::BvpSolve(_) => "bvp-solve",
            Command::BvpConverge(_) => "bvp-converge",
            Command::Minimize(_) => "minimize",
            Command::NoetherCheck(_) => "noether-check",
            Command::MountainPass(_) => "mountain-pass",
            Command::Coherence(_) => "coherence",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::OpsVerify(a)
            | Command::OpsTable(a)
            | Command::BvpSolve(a)
            | Command::BvpConverge(a)
            | Command::Minimize(a)
            | Command::NoetherCheck(a)
            | Command::MountainPass(a)
            | Command::Coherence(a) => a,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Fractional order, in (0, 1]
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    /// Tempering parameter, >= 0
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Left endpoint of the interval
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    /// Right endpoint of the interval
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Number of grid intervals
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Lagrangian: catalog name or expression in x, y, t
    #[arg(long, default_value = "dirichlet")]
    lagrangian: String,
    /// Symmetry: catalog name or expression pair `xi;eta`
    #[arg(long, default_value = "tempered-translation")]
    symmetry: String,
    /// Input function: CSV path or expression in t
    #[arg(long)]
    f: Option<String>,
    /// Output path: `.csv` for the primary grid result, anything else for
    /// the JSON report
    #[arg(long)]
    out: Option<PathBuf>,
    /// Convergence tolerance for iterative solvers
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Iteration cap for iterative solvers
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Print the full JSON report to standard output
    #[arg(long)]
    json: bool,
    /// Seed for every randomized suite
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

/// The fully resolved configuration, embedded verbatim in every JSON
/// report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub alpha: f64,
    pub sigma: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub lagrangian: String,
    pub symmetry: String,
    pub f: Option<String>,
    pub out: Option<String>,
    pub tol: f64,
    pub max_iter: usize,
    pub json: bool,
    pub seed: u64,
    /// value of TEMPVAR_THREADS, if set
    pub threads: Option<usize>,
    #[serde(skip)]
    params: TemperedParams,
}

/// Parse and validate a full argument vector (excluding the program name
/// handled by clap itself). Unknown catalog names, malformed expressions,
/// and out-of-domain parameters are rejected here, before any computation.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    validate(&cli).map_err(|e| {
        clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n"))
    })
}

fn validate(cli: &Cli) -> Result<RunConfig> {
    let args = cli.command.args();
    let params = TemperedParams::new(args.alpha, args.sigma, args.a, args.b)
        .map_err(|e| Error::Domain(format!("--alpha/--sigma/--a/--b: {e}")))?;
    if args.n < 8 {
        return Err(Error::Domain(format!("--n: need at least 8 intervals, got {}", args.n)));
    }
    if matches!(cli.command, Command::BvpConverge(_)) && args.n % 8 != 0 {
        return Err(Error::Domain(format!(
            "--n: the convergence study halves the grid three times, so n must be a multiple of 8, got {}",
            args.n
        )));
    }
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Error::Domain(format!("--tol: need a positive tolerance, got {}", args.tol)));
    }
    if args.max_iter == 0 {
        return Err(Error::Domain("--max-iter: need at least one iteration".into()));
    }
    const LAGRANGIANS: [&str; 4] = ["dirichlet", "linear-forced", "double-well", "power"];
    if !LAGRANGIANS.contains(&args.lagrangian.as_str()) {
        Expr::parse(&args.lagrangian).map_err(|e| {
            Error::Domain(format!(
                "--lagrangian: `{}` is neither a catalog name ({}) nor a valid expression: {e}",
                args.lagrangian,
                LAGRANGIANS.join(", ")
            ))
        })?;
    }
    const SYMMETRIES: [&str; 3] = ["translation", "tempered-translation", "scaling"];
    if !SYMMETRIES.contains(&args.symmetry.as_str()) {
        let (xi, eta) = args.symmetry.split_once(';').ok_or_else(|| {
            Error::Domain(format!(
                "--symmetry: `{}` is neither a catalog name ({}) nor an expression pair `xi;eta`",
                args.symmetry,
                SYMMETRIES.join(", ")
            ))
        })?;
        Expr::parse(xi).map_err(|e| Error::Domain(format!("--symmetry: bad xi expression: {e}")))?;
        Expr::parse(eta)
            .map_err(|e| Error::Domain(format!("--symmetry: bad eta expression: {e}")))?;
    }
    if let Some(f) = &args.f {
        if !Path::new(f).is_file() {
            Expr::parse(f).map_err(|e| {
                Error::Domain(format!(
                    "--f: `{f}` is neither an existing CSV file nor a valid expression in t: {e}"
                ))
            })?;
        }
    }
    let threads = match std::env::var("TEMPVAR_THREADS") {
        Ok(v) => Some(v.parse::<usize>().map_err(|_| {
            Error::Domain(format!("TEMPVAR_THREADS: expected a thread count, got `{v}`"))
        })?),
        Err(_) => None,
    };
    Ok(RunConfig {
        command: cli.command.name().to_string(),
        alpha: args.alpha,
        sigma: args.sigma,
        a: args.a,
        b: args.b,
        n: args.n,
        lagrangian: args.lagrangian.clone(),
        symmetry: args.symmetry.clone(),
        f: args.f.clone(),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        tol: args.tol,
        max_iter: args.max_iter,
        json: args.json,
        seed: args.seed,
        threads,
        params,
    })
}

/// Entry point for the binary: parse, run, and map errors to exit codes.
pub fn main_entry() -> i32 {
    let config = match parse_args(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            // clap reserves exit 0 for --help/--version and 2 for usage
            // errors; mirror that split
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    run(&config)
}

/// Execute a validated configuration; returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match dispatch(config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(out) = &config.out {
                // never leave a partial artifact behind
                let _ = std::fs::remove_file(out);
            }
            1
        }
    }
}

/// JSON envelope for every report.
#[derive(Serialize)]
struct Output<'a, T: Serialize> {
    config: &'a RunConfig,
    report: T,
}

fn dispatch(config: &RunConfig) -> Result<()> {
    match config.command.as_str() {
        "ops-verify" => {
            let (report, grid) = ops_verify(config)?;
            let summary = format!(
                "ops-verify: annihilation {:.3e}, composition {:.3e}, ibp(rel) {:.3e}, \
                 norm ratio {:.4} -> {}",
                report.annihilation_max,
                report.composition.max(),
                report.ibp.derivative_relative.max(report.ibp.integral_relative),
                report.norm_ratio,
                if report.all_pass { "ok" } else { "FAIL" }
            );
            if report.all_pass {
                emit(config, &report, grid.as_ref(), &summary)
            } else {
                emit(config, &report, grid.as_ref(), &summary)?;
                Err(Error::Computation("identity-verification suite failed".into()))
            }
        }
        "ops-table" => {
            let (report, grid) = ops_table(config)?;
            let summary = format!(
                "ops-table: {} nodes on [{}, {}], alpha {}, sigma {}",
                report.t.len(),
                config.a,
                config.b,
                config.alpha,
                config.sigma
            );
            emit(config, &report, grid.as_ref(), &summary)
        }
        "bvp-solve" => {
            let (report, grid) = bvp_solve(config)?;
            let summary = format!(
                "bvp-solve: n {}, |u| {:.6e}, orthogonality {:.3e}, energy gap {:.3e}",
                report.n, report.solution_norm, report.galerkin_orthogonality,
                report.energy_identity_gap
            );
            emit(config, &report, Some(&grid), &summary)
        }
        "bvp-converge" => {
            let report = bvp_converge(config)?;
            let last = report.rows.last().expect("study always has rows");
            let summary = format!(
                "bvp-converge: n {} -> l2 error {:.6e}, last ratio {:.3}, monotone: {}",
                last.n, last.l2_error, last.ratio, report.monotone
            );
            emit(config, &report, None, &summary)
        }
        "minimize" => {
            let (report, grid) = minimize(config)?;
            let summary = format!(
                "minimize[{}]: value {:.6e}, grad {:.3e}, |u| {:.6e}, {} iterations, converged: {}",
                config.lagrangian,
                report.solve.value,
                report.solve.grad_norm,
                report.extremal_norm,
                report.solve.iterations,
                report.solve.converged
            );
            emit(config, &report, Some(&grid), &summary)
        }
        "noether-check" => {
            let (report, grid) = noether_check(config)?;
            let summary = format!(
                "noether-check[{} / {}]: invariance {}, C mean {:.6e}, relative drift {:.3e}",
                config.lagrangian,
                config.symmetry,
                report
                    .invariance
                    .as_ref()
                    .map_or("n/a".to_string(), |r| format!("{:.3e}", r.max_deviation)),
                report.constant.mean,
                report.constant.relative_drift
            );
            emit(config, &report, Some(&grid), &summary)
        }
        "mountain-pass" => {
            let (report, grid) = mountain_pass_run(config)?;
            let summary = format!(
                "mountain-pass[{}]: ring minimum {:.6e} at rho {:.3e}, value {:.6e}, grad {:.3e}, converged: {}",
                config.lagrangian,
                report.geometry.eta,
                report.geometry.rho,
                report.solve.value,
                report.solve.grad_norm,
                report.solve.converged
            );
            emit(config, &report, Some(&grid), &summary)
        }
        "coherence" => {
            let report = coherence(config)?;
            let summary = format!(
                "coherence[{} / {}]: untempered gap {:.3e}, classical gap {:.3e}",
                config.lagrangian, config.symmetry, report.gap_untempered, report.gap_classical
            );
            emit(config, &report, None, &summary)
        }
        other => Err(Error::Domain(format!("unknown command `{other}`"))),
    }
}

/// Print the summary (or JSON) and write `--out` if requested.
fn emit<T: Serialize>(
    config: &RunConfig,
    report: &T,
    grid: Option<&GridFunction>,
    summary: &str,
) -> Result<()> {
    let doc = serde_json::to_string_pretty(&Output { config, report })
        .map_err(|e| Error::Computation(format!("serialization failed: {e}")))?;
    if config.json {
        println!("{doc}");
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    if let Some(out) = &config.out {
        let path = Path::new(out);
        let wants_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let result = if wants_csv {
            match grid {
                Some(g) => g.write_csv(path),
                None => Err(Error::Domain(format!(
                    "`{}` produces no grid result; use a non-.csv --out path for the JSON report",
                    config.command
                ))),
            }
        } else {
            std::fs::write(path, format!("{doc}\n")).map_err(Error::Io)
        };
        if result.is_err() {
            let _ = std::fs::remove_file(path);
        }
        result?;
    }
    Ok(())
}

/// Resolve `--f` to a grid function: CSV file, expression in t, or the
/// provided default.
fn resolve_f(
    config: &RunConfig,
    default: impl Fn(f64) -> f64,
) -> Result<GridFunction> {
    match &config.f {
        None => Ok(GridFunction::from_fn(config.params, config.n, default)),
        Some(src) => {
            let path = Path::new(src);
            if path.is_file() {
                GridFunction::read_csv(config.params, path)
            } else {
                let expr = Expr::parse(src)?;
                Ok(GridFunction::from_fn(config.params, config.n, |t| {
                    expr.eval(Bindings { t, ..Bindings::default() })
                }))
            }
        }
    }
}

/// Resolve `--lagrangian`: catalog name (forcing drawn from `--f`,
/// defaulting to 1 for "linear-forced") or expression in x, y, t with
/// central-difference partials.
fn resolve_lagrangian(config: &RunConfig) -> Result<LagrangianSpec> {
    match config.lagrangian.as_str() {
        "linear-forced" => {
            let f = resolve_f(config, |_| 1.0)?;
            variational::catalog("linear-forced", Some(f), 4.0)
        }
        name @ ("dirichlet" | "double-well" | "power") => variational::catalog(name, None, 4.0),
        src => {
            let l = Expr::parse(src)?;
            let (l1, l2, l3) = (l.clone(), l.clone(), l);
            let fd = 1e-6;
            LagrangianSpec::new(
                format!("custom({src})"),
                Arc::new(move |x, y, t| l1.eval(Bindings { x, y, t, ..Bindings::default() })),
                Arc::new(move |x, y, t| {
                    let hi = l2.eval(Bindings { x: x + fd, y, t, ..Bindings::default() });
                    let lo = l2.eval(Bindings { x: x - fd, y, t, ..Bindings::default() });
                    (hi - lo) / (2.0 * fd)
                }),
                Arc::new(move |x, y, t| {
                    let hi = l3.eval(Bindings { x, y: y + fd, t, ..Bindings::default() });
                    let lo = l3.eval(Bindings { x, y: y - fd, t, ..Bindings::default() });
                    (hi - lo) / (2.0 * fd)
                }),
                None,
            )
        }
    }
}

fn resolve_symmetry(config: &RunConfig) -> Result<noether::SymmetrySpec> {
    match config.symmetry.as_str() {
        name @ ("translation" | "tempered-translation" | "scaling") => {
            noether::catalog(name, config.params)
        }
        src => {
            let (xi, eta) = src.split_once(';').ok_or_else(|| {
                Error::Domain(format!("`{src}` is not an expression pair `xi;eta`"))
            })?;
            noether::from_expressions(xi, eta, config.params)
        }
    }
}

/// Random zero-boundary start for the minimizer: six seeded sine modes.
fn random_start(config: &RunConfig) -> Result<SpaceElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let p = config.params;
    SpaceElement::from_fn(p, config.n, |t| {
        let s = (t - p.a) / p.width();
        c.iter()
            .enumerate()
            .map(|(k, ck)| ck * ((k + 1) as f64 * std::f64::consts::PI * s).sin())
            .sum()
    })
}

fn default_hump(params: TemperedParams) -> impl Fn(f64) -> f64 {
    move |t| (std::f64::consts::PI * (t - params.a) / params.width()).sin()
}

#[derive(Serialize)]
struct OpsVerifyReport {
    /// max |ᶜ𝔻 e^{−σ(t−a)}|: exactly annihilated up to roundoff
    annihilation_max: f64,
    composition: tempered_ops::CompositionReport,
    ibp: tempered_ops::IbpReport,
    /// measured L² norm of the discrete left integral
    operator_norm: f64,
    /// analytic norm bound γ(α, σ(b−a)) / (σ^α Γ(α))
    norm_bound: f64,
    norm_ratio: f64,
    all_pass: bool,
}

fn ops_verify(config: &RunConfig) -> Result<(OpsVerifyReport, Option<GridFunction>)> {
    let p = config.params;
    let n = config.n;
    let exp_decay = GridFunction::from_fn(p, n, |t| (-(p.sigma * (t - p.a))).exp());
    let annihilation_max = tempered_ops::left_caputo_derivative(&exp_decay)?.max_norm();

    let hump = GridFunction::from_fn(p, n, default_hump(p));
    let composition = tempered_ops::verify_composition(&hump)?;

    let v = GridFunction::from_fn(p, n, |t| {
        let s = (t - p.a) / p.width();
        s * (1.0 - s)
    });
    let ibp = tempered_ops::verify_integration_by_parts(&hump, &v)?;

    let kind = tempered_ops::OperatorKind {
        side: tempered_ops::Side::Left,
        family: tempered_ops::Family::RlIntegral { order: p.alpha },
    };
    let operator_norm = tempered_ops::operator_matrix(kind, p, n)?.l2_operator_norm();
    let norm_bound = tempered_ops::integral_l2_bound(p)?;
    let norm_ratio = operator_norm / norm_bound;

    let all_pass = annihilation_max <= 1e-12
        && composition.max() <= 5e-2
        && ibp.derivative_relative <= 1e-3
        && ibp.integral_relative <= 1e-3
        && norm_ratio <= 1.02;
    Ok((
        OpsVerifyReport {
            annihilation_max,
            composition,
            ibp,
            operator_norm,
            norm_bound,
            norm_ratio,
            all_pass,
        },
        None,
    ))
}

#[derive(Serialize)]
struct OpsTableReport {
    t: Vec<f64>,
    input: Vec<f64>,
    left_integral: Vec<f64>,
    right_integral: Vec<f64>,
    left_caputo: Vec<f64>,
    right_caputo: Vec<f64>,
}

/// The CSV grid result is the left Caputo derivative; the JSON report
/// carries all four operator columns.
fn ops_table(config: &RunConfig) -> Result<(OpsTableReport, Option<GridFunction>)> {
    let p = config.params;
    let f = resolve_f(config, default_hump(p))?;
    let left_integral = tempered_ops::left_tempered_integral(&f, p.alpha)?;
    let right_integral = tempered_ops::right_tempered_integral(&f, p.alpha)?;
    let left_caputo = tempered_ops::left_caputo_derivative(&f)?;
    let right_caputo = tempered_ops::right_caputo_derivative(&f)?;
    let report = OpsTableReport {
        t: f.nodes(),
        input: f.values.clone(),
        left_integral: left_integral.values.clone(),
        right_integral: right_integral.values.clone(),
        left_caputo: left_caputo.values.clone(),
        right_caputo: right_caputo.values,
    };
    Ok((report, Some(left_caputo)))
}

#[derive(Serialize)]
struct BvpSolveReport {
    n: usize,
    solution_norm: f64,
    solution_max: f64,
    galerkin_orthogonality: f64,
    energy_identity_gap: f64,
}

fn bvp_solve(config: &RunConfig) -> Result<(BvpSolveReport, GridFunction)> {
    let f = resolve_f(config, |_| 1.0)?;
    let system = bvp::assemble(config.params, config.n, &f)?;
    let u = bvp::solve(&system)?;
    let report = BvpSolveReport {
        n: config.n,
        solution_norm: norm(&u),
        solution_max: u.u.max_norm(),
        galerkin_orthogonality: bvp::galerkin_orthogonality(&system, &u)?,
        energy_identity_gap: bvp::energy_identity_gap(&system, &u)?,
    };
    Ok((report, u.u))
}

#[derive(Serialize)]
struct BvpConvergeReport {
    rows: Vec<bvp::ConvergenceRow>,
    monotone: bool,
}

fn bvp_converge(config: &RunConfig) -> Result<BvpConvergeReport> {
    let p = config.params;
    let ns = [config.n / 8, config.n / 4, config.n / 2, config.n];
    let rows = bvp::convergence_study(p, |t| default_hump(p)(t), &ns)?;
    let monotone = rows.windows(2).all(|w| w[1].l2_error < w[0].l2_error);
    Ok(BvpConvergeReport { rows, monotone })
}

#[derive(Serialize)]
struct MinimizeReport {
    solve: variational::SolveReport,
    extremal_norm: f64,
    extremal_max: f64,
}

fn minimize(config: &RunConfig) -> Result<(MinimizeReport, GridFunction)> {
    let spec = resolve_lagrangian(config)?;
    let basis = BasisSet::new(config.params, config.n)?;
    let u0 = random_start(config)?;
    let solve = variational::minimize_direct(&spec, &u0, &basis, config.tol, config.max_iter)?;
    let extremal = solve.extremal.u.clone();
    let report = MinimizeReport {
        extremal_norm: norm(&solve.extremal),
        extremal_max: extremal.max_norm(),
        solve,
    };
    Ok((report, extremal))
}

#[derive(Serialize)]
struct NoetherCheckReport {
    /// invariance of the action under s in {−1, 1}; absent when the
    /// trajectory leaves the zero-boundary space
    invariance: Option<noether::InvarianceReport>,
    necessary_condition_residual: Option<f64>,
    constant: noether::NoetherReport,
    /// present only for Lagrangians independent of x under the
    /// tempered-translation generator
    momentum: Option<noether::MomentumReport>,
}

/// The CSV grid result is the conserved quantity C[u]_t on the nodes.
fn noether_check(config: &RunConfig) -> Result<(NoetherCheckReport, GridFunction)> {
    let p = config.params;
    let spec = resolve_lagrangian(config)?;
    let sym = resolve_symmetry(config)?;
    let traj = resolve_f(config, default_hump(p))?;
    let constant = noether::noether_constant_grid(&spec, &sym, &traj)?;
    // tolerate roundoff at the endpoints (e.g. sin(pi) != 0 exactly) the
    // same way SpaceElement::from_fn does
    let mut clamped = traj.clone();
    let last = clamped.n();
    if clamped.values[0].abs() <= 1e-12 && clamped.values[last].abs() <= 1e-12 {
        clamped.values[0] = 0.0;
        clamped.values[last] = 0.0;
    }
    let (invariance, residual) = match SpaceElement::new(clamped) {
        Ok(u) => (
            Some(noether::check_invariance(&spec, &sym, &u, &[-1.0, 1.0])?),
            Some(noether::necessary_condition_residual(&spec, &sym, &u)?),
        ),
        Err(_) => (None, None),
    };
    let momentum = if config.symmetry == "tempered-translation" {
        noether::corollary_momentum(&spec, &traj).ok()
    } else {
        None
    };
    let c_values = constant.c_values.clone();
    let report = NoetherCheckReport {
        invariance,
        necessary_condition_residual: residual,
        constant,
        momentum,
    };
    Ok((report, c_values))
}

#[derive(Serialize)]
struct MountainPassReport {
    geometry: mountain_pass::GeometryReport,
    solve: variational::SolveReport,
    critical_norm: f64,
}

fn mountain_pass_run(config: &RunConfig) -> Result<(MountainPassReport, GridFunction)> {
    let spec = resolve_lagrangian(config)?;
    let geometry = mountain_pass::verify_geometry(&spec, config.params, config.n, config.seed)?;
    if !geometry.success {
        return Err(Error::Computation(format!(
            "geometry not found for `{}`: ring minimum {:.3e}, far point {}",
            config.lagrangian,
            geometry.eta,
            if geometry.lambda.is_some() { "found" } else { "missing" }
        )));
    }
    let e = geometry.e.clone().expect("success implies a far point");
    let basis = BasisSet::new(config.params, config.n)?;
    let solve =
        mountain_pass::find_critical_point(&spec, &e, &basis, 9, config.tol, config.max_iter)?;
    let critical = solve.extremal.u.clone();
    let report = MountainPassReport {
        geometry,
        critical_norm: norm(&solve.extremal),
        solve,
    };
    Ok((report, critical))
}

fn coherence(config: &RunConfig) -> Result<noether::CoherenceReport> {
    let p = config.params;
    let spec = resolve_lagrangian(config)?;
    let sym_name = match config.symmetry.as_str() {
        name @ ("translation" | "tempered-translation" | "scaling") => name,
        other => {
            return Err(Error::Domain(format!(
                "the coherence diagram re-instantiates the symmetry at each (alpha, sigma), \
                 so it needs a catalog name, got `{other}`"
            )))
        }
    };
    let traj = resolve_f(config, default_hump(p))?;
    noether::coherence_diagram(&spec, sym_name, &traj)
}
