//! Batch driver: load a system configuration, run named verification
//! suites, and emit reports and CSV tables for the truncation labs.
//!
//! Exit codes: 0 = all checks passed, 1 = a mathematical check failed,
//! 2 = configuration or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use cdsys_core::config;
use cdsys_core::error::CoreError;
use cdsys_core::labs::{self, CircleFunction, ShiftWindow};
use cdsys_core::rcdiag;
use cdsys_core::report::{fmt_f, write_csv};
use cdsys_core::suites::{run_suite, SuiteKind};

#[derive(Parser)]
#[command(
    name = "cdsys",
    version,
    about = "Verification suites for finite dynamical systems and shift-truncation labs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite on a configured system.
    Verify(VerifyArgs),
    /// Write the relative-continuity modulus table of a pair as CSV.
    RcModulus(RcModulusArgs),
    /// Run a bilateral-shift truncation experiment and write its CSV.
    ShiftLab(ShiftLabArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// System configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Suite name: module | fourier | crossed | rc | fell | all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Seed for the sampled elements.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for side tables (dual-translation modulus, fiber dims).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RcModulusArgs {
    #[arg(long)]
    config: PathBuf,
    /// Two comma-separated element names from the config fixtures.
    #[arg(long)]
    pair: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ShiftLabArgs {
    /// Experiment: sum | fourier | dichotomy | cube | twist | positive.
    #[arg(long)]
    experiment: String,
    /// Window half-width N.
    #[arg(long)]
    window: Option<i64>,
    /// Grid size for circle points.
    #[arg(long)]
    grid: Option<usize>,
    /// Fixture: e0 | gentle | step.
    #[arg(long, default_value = "gentle")]
    fixture: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Override the interior-residual pass tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::RcModulus(args) => cmd_rc_modulus(args),
        Command::ShiftLab(args) => cmd_shift_lab(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type NamedElements = std::collections::BTreeMap<String, cdsys_core::Mat>;

fn load_system(path: &PathBuf) -> Result<(cdsys_core::dynsys::DynSystem, NamedElements), CoreError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg = config::parse_config(&text)?;
    config::build_system(&cfg)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, CoreError> {
    let (sys, _) = load_system(&args.config)?;
    let kind: SuiteKind = args.suite.parse()?;
    let (report, artifacts) = run_suite(&sys, kind, args.seed)?;
    print!("{}", report.render());

    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| CoreError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        if let Some(table) = &artifacts.v_modulus {
            let rows: Vec<Vec<String>> = table
                .iter()
                .enumerate()
                .map(|(x, m)| vec![x.to_string(), fmt_f(*m)])
                .collect();
            write_csv(
                &dir.join("v_modulus.csv"),
                &[
                    "quantity: dual-translation modulus of a left inner product".into(),
                    format!("seed: {}", args.seed),
                ],
                "x_index,modulus",
                &rows,
            )?;
        }
        if let Some(dims) = &artifacts.fiber_dims {
            let rows: Vec<Vec<String>> = dims
                .iter()
                .enumerate()
                .map(|(x, d)| vec![x.to_string(), d.to_string()])
                .collect();
            write_csv(
                &dir.join("fiber_dims.csv"),
                &["quantity: spectral bundle fiber dimensions".into()],
                "x_index,fiber_dim",
                &rows,
            )?;
        }
    }
    Ok(report.overall())
}

fn cmd_rc_modulus(args: RcModulusArgs) -> Result<bool, CoreError> {
    let (sys, elements) = load_system(&args.config)?;
    let (name_p, name_q) = args
        .pair
        .split_once(',')
        .ok_or_else(|| CoreError::Usage("pair must be \"name1,name2\"".into()))?;
    let p = elements
        .get(name_p.trim())
        .ok_or_else(|| CoreError::Usage(format!("unknown element {:?}", name_p.trim())))?;
    let q = elements
        .get(name_q.trim())
        .ok_or_else(|| CoreError::Usage(format!("unknown element {:?}", name_q.trim())))?;
    let table = rcdiag::rc_modulus(&sys, p, q)?;
    let rows: Vec<Vec<String>> = (0..table.len())
        .map(|z| {
            vec![z.to_string(), fmt_f(table.d[z]), fmt_f(table.c1[z]), fmt_f(table.c2[z])]
        })
        .collect();
    write_csv(
        &args.out,
        &[
            "quantity: relative-continuity modulus d(z) with identity-point defects c1, c2".into(),
            format!("pair: ({}, {})", name_p.trim(), name_q.trim()),
            format!("seed: {}", args.seed),
        ],
        "z_index,d,c1,c2",
        &rows,
    )?;
    println!("rc-modulus: wrote {} rows", table.len());
    Ok(true)
}

fn pick_pair(fixture: &str, w: ShiftWindow) -> Result<(CircleFunction, CircleFunction), CoreError> {
    match fixture {
        "e0" => Ok((CircleFunction::exponential(0), CircleFunction::exponential(0))),
        "gentle" => Ok(labs::gentle_pair()),
        "step" => Ok((labs::step_fixture(w)?, CircleFunction::exponential(0))),
        other => Err(CoreError::Usage(format!(
            "unknown fixture {other:?}; expected e0 | gentle | step"
        ))),
    }
}

fn cmd_shift_lab(args: ShiftLabArgs) -> Result<bool, CoreError> {
    match args.experiment.as_str() {
        "sum" => {
            let half = args.window.unwrap_or(64);
            let w = ShiftWindow::new(half)?;
            let (phi, _) = pick_pair(&args.fixture, w)?;
            let mut rows = Vec::new();
            let mut all_pass = true;
            let tol = args.tol.unwrap_or(1e-10);
            let b = phi.bandwidth();
            for (n, k) in [(half, half / 2), (half, half - b), (2 * half, half / 2)] {
                let wn = ShiftWindow::new(n)?;
                let rep = labs::shift_sum_report(&phi, wn, k)?;
                all_pass &= rep.interior_residual <= tol;
                rows.push(vec![n.to_string(), k.to_string(), fmt_f(rep.interior_residual)]);
            }
            write_csv(
                &args.out,
                &[
                    "quantity: interior residual of the orbit sum against the Laurent matrix of |phi|^2".into(),
                    format!("fixture: {}", args.fixture),
                    format!("eps_N: {}", fmt_f(labs::truncation_budget(&[&phi]))),
                ],
                "N,K,interior_residual",
                &rows,
            )?;
            println!("shift-lab sum: {}", if all_pass { "PASS" } else { "FAIL" });
            Ok(all_pass)
        }
        "fourier" => {
            let half = args.window.unwrap_or(64);
            let grid = args.grid.unwrap_or(16);
            if grid < 8 {
                return Err(CoreError::Usage("grid needs at least 8 points".into()));
            }
            let w = ShiftWindow::new(half)?;
            let (phi, _) = pick_pair(&args.fixture, w)?;
            let tol = args.tol.unwrap_or(1e-10);
            let mut rows = Vec::new();
            let mut all_pass = true;
            for k in 0..grid {
                let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / grid as f64);
                let rep = labs::fourier_shift_report(&phi, z, w)?;
                all_pass &= rep.interior_residual <= tol;
                rows.push(vec![fmt_f(z.re), fmt_f(z.im), fmt_f(rep.interior_residual)]);
            }
            write_csv(
                &args.out,
                &[
                    "quantity: interior residual of the weighted orbit sum against the closed-form coefficient operator".into(),
                    format!("fixture: {}", args.fixture),
                    format!("window: {half}"),
                    format!("eps_N: {}", fmt_f(labs::truncation_budget(&[&phi]))),
                ],
                "z_re,z_im,interior_residual",
                &rows,
            )?;
            println!("shift-lab fourier: {}", if all_pass { "PASS" } else { "FAIL" });
            Ok(all_pass)
        }
        "dichotomy" => {
            let half = args.window.unwrap_or(256);
            let grid = args.grid.unwrap_or(64);
            let w = ShiftWindow::new(half)?;
            let (phi, psi) = pick_pair(&args.fixture, w)?;
            let rep = labs::rc_dichotomy(&phi, &psi, w, grid, grid)?;
            write_dichotomy_csv(&args.out, &rep, &args.fixture, half)?;
            println!(
                "shift-lab dichotomy: {} (floor near 1 = {})",
                if rep.all_pass { "PASS" } else { "FAIL" },
                fmt_f(rep.floor_near_one)
            );
            Ok(rep.all_pass)
        }
        "cube" => {
            let half = args.window.unwrap_or(64);
            let grid = args.grid.unwrap_or(16);
            if grid < 8 {
                return Err(CoreError::Usage("grid needs at least 8 points".into()));
            }
            let w = ShiftWindow::new(half)?;
            let (phi, psi) = pick_pair(&args.fixture, w)?;
            let mut rows = Vec::new();
            let mut all_pass = true;
            for k in 0..grid {
                let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / grid as f64);
                let rep = labs::reverse_cube_bound(&phi, &psi, w, z)?;
                all_pass &= rep.pass;
                rows.push(vec![
                    fmt_f(z.re),
                    fmt_f(z.im),
                    fmt_f(rep.lhs),
                    fmt_f(rep.rhs),
                    fmt_f(rep.slack),
                    (rep.pass as u8).to_string(),
                ]);
            }
            write_csv(
                &args.out,
                &[
                    "quantity: cubed oscillation of conj(phi) psi against the four-term coefficient bound".into(),
                    format!("fixture: {}", args.fixture),
                    format!("window: {half}"),
                ],
                "z_re,z_im,lhs,rhs,slack,pass",
                &rows,
            )?;
            println!("shift-lab cube: {}", if all_pass { "PASS" } else { "FAIL" });
            Ok(all_pass)
        }
        "twist" => {
            let half = args.window.unwrap_or(256);
            let grid = args.grid.unwrap_or(64);
            let w = ShiftWindow::new(half)?;
            let delta = match args.fixture.as_str() {
                "e0" => CircleFunction::exponential(0),
                _ => labs::step_fixture(w)?,
            };
            let e0 = CircleFunction::exponential(0);
            let xygrid = 8usize.max(grid / 8);
            let rep = labs::delta_twist_demo(&delta, &e0, &e0, w, grid, xygrid)?;
            let mut rows = Vec::new();
            for (label, table) in [
                ("base", &rep.base),
                ("both_twisted", &rep.both_twisted),
                ("mixed", &rep.mixed),
            ] {
                for row in &table.rows {
                    rows.push(vec![
                        label.to_string(),
                        fmt_f(row.z.re),
                        fmt_f(row.z.im),
                        fmt_f(row.d_tilde),
                        fmt_f(row.omega),
                        fmt_f(row.bound_rhs),
                        (row.pass as u8).to_string(),
                    ]);
                }
            }
            write_csv(
                &args.out,
                &[
                    "quantity: dichotomy tables for the unimodular-twist demonstration".into(),
                    format!("window: {half}"),
                    format!("unimodular_deviation: {}", fmt_f(rep.unimodular_deviation)),
                    format!("mixed_floor_near_one: {}", fmt_f(rep.mixed.floor_near_one)),
                ],
                "table,z_re,z_im,d_tilde,omega,bound_rhs,pass",
                &rows,
            )?;
            let ok = rep.base.all_pass && rep.both_twisted.all_pass && rep.mixed.all_pass;
            println!(
                "shift-lab twist: {} (mixed floor = {})",
                if ok { "PASS" } else { "FAIL" },
                fmt_f(rep.mixed.floor_near_one)
            );
            Ok(ok)
        }
        "positive" => {
            let half = args.window.unwrap_or(64);
            let w = ShiftWindow::new(half)?;
            let phis: Vec<CircleFunction> = (0..4).map(CircleFunction::exponential).collect();
            let lambdas = [1.0, 0.5, 0.25, 0.125];
            let rep = labs::positive_decomposition(&lambdas, &phis, w)?;
            write_csv(
                &args.out,
                &[
                    "quantity: sampled sup of sum lambda_n |phi_n|^2 against the windowed strict-sum norm".into(),
                    format!("window: {half}"),
                    format!("eps_N: {}", fmt_f(rep.eps_n)),
                ],
                "sampled_sup,windowed_norm,allowance,pass",
                &[vec![
                    fmt_f(rep.sampled_sup),
                    fmt_f(rep.windowed_norm),
                    fmt_f(rep.allowance),
                    (rep.pass as u8).to_string(),
                ]],
            )?;
            println!("shift-lab positive: {}", if rep.pass { "PASS" } else { "FAIL" });
            Ok(rep.pass)
        }
        other => Err(CoreError::Usage(format!(
            "unknown experiment {other:?}; expected sum | fourier | dichotomy | cube | twist | positive"
        ))),
    }
}

fn write_dichotomy_csv(
    path: &std::path::Path,
    rep: &labs::DichotomyReport,
    fixture: &str,
    window: i64,
) -> Result<(), CoreError> {
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|row| {
            vec![
                fmt_f(row.z.re),
                fmt_f(row.z.im),
                fmt_f(row.d_tilde),
                fmt_f(row.omega),
                fmt_f(row.bound_rhs),
                fmt_f(rep.eps_n),
                (row.pass as u8).to_string(),
            ]
        })
        .collect();
    write_csv(
        path,
        &[
            "quantity: windowed relative-continuity modulus against the oscillation bound".into(),
            format!("fixture: {fixture}"),
            format!("window: {window}"),
            format!("interior_radius: {}", rep.interior_radius),
            format!("sup_phi: {}", fmt_f(rep.sup_phi)),
            format!("sup_psi: {}", fmt_f(rep.sup_psi)),
            format!("eps_N: {}", fmt_f(rep.eps_n)),
        ],
        "z_re,z_im,d_tilde,omega,bound_rhs,eps_N,pass",
        &rows,
    )?;
    Ok(())
}
