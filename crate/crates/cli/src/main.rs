mod output;
mod problem;
mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use twospin::oracle::integrate_propagator;
use twospin::resonance::{omega_grid, scan, ScanOptions};
use twospin::spectrum::solve_levels;
use twospin::{propagate, Error, IntegratorConfig, Mode};

use problem::ProblemFile;

#[derive(Parser, Debug)]
#[command(name = "twospin", version, about = "Propagators, spectra and resonance scans for two coupled spins")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolution operator (or an evolved state) for a problem file.
    Propagate(PropagateArgs),
    /// Stationary levels for constant rotating-frame parameters.
    Spectrum(SpectrumArgs),
    /// Maximum transition probabilities over a range of drive frequencies.
    Scan(ScanArgs),
    /// Run the built-in invariant suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Closed,
    Oracle,
}

#[derive(Args, Debug)]
struct PropagateArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Final time; the start is the problem's t0.
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    /// JSON array of four [re, im] pairs to evolve instead of returning the matrix.
    #[arg(long, conflicts_with = "full_matrix")]
    state: Option<PathBuf>,
    #[arg(long)]
    full_matrix: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Also integrate numerically and report the largest entry difference.
    #[arg(long)]
    cross_check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    /// Comma-separated vector x,y,z.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vec3)]
    a: [f64; 3],
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vec3)]
    b: [f64; 3],
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(rename_all = "kebab-case")]
struct ScanArgs {
    #[arg(long = "A", allow_hyphen_values = true)]
    amplitude: f64,
    #[arg(long = "A0", allow_hyphen_values = true)]
    z_field: f64,
    #[arg(long = "J", allow_hyphen_values = true, default_value_t = 0.0)]
    exchange: f64,
    #[arg(long, allow_hyphen_values = true)]
    omega_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    omega_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Algebraic identities only.
    #[arg(long)]
    quick: bool,
    /// Corrupt one closed form to exercise the failure path.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut v = [0.0f64; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
        if !slot.is_finite() {
            return Err(format!("not finite: {p:?}"));
        }
    }
    Ok(v)
}

/// A failed command and its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoClosedForm(_) => 3,
            Error::NoConvergence { .. }
            | Error::EigenNoConvergence
            | Error::DegenerateDenominator { .. }
            | Error::NotAnEigenpair { .. } => 4,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::input(format!("{}: {e}", path.display()))
}

fn read(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: Option<&std::path::Path>, text: &str) -> Result<(), Failure> {
    output::emit(path, text).map_err(|e| Failure { code: 2, message: format!("cannot write output: {e}") })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TWOSPIN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| Failure::input(format!("TWOSPIN_THREADS must be a count, got {raw:?}")))?;
    // a pool that is already configured is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn cmd_propagate(args: &PropagateArgs) -> Result<(), Failure> {
    let file = ProblemFile::parse(&read(&args.problem)?).map_err(Failure::input)?;
    let p = file.to_model().map_err(Failure::input)?;
    if !args.t.is_finite() {
        return Err(Failure::input("--t must be finite"));
    }
    let mode = match args.method {
        MethodArg::Auto => Mode::Auto,
        MethodArg::Closed => Mode::Closed,
        MethodArg::Oracle => Mode::Oracle,
    };
    let cfg = IntegratorConfig::default();
    let r = propagate(&p, p.t0, args.t, mode, &cfg)?;
    let mut doc = json!({
        "method": r.method.label(),
        "t0": r.t0,
        "t": r.t1,
        "unitarity_defect": r.unitarity_defect(),
    });
    if args.cross_check {
        let o = integrate_propagator(&p, p.t0, args.t, &cfg)?;
        doc["oracle_residual"] = json!(r.matrix.max_abs_diff(&o.propagator.matrix));
    }
    match &args.state {
        Some(path) => {
            let psi = output::parse_state(&read(path)?).map_err(Failure::input)?;
            doc["state"] = output::vector(&r.apply(&psi));
        }
        None => doc["matrix"] = output::matrix(&r.matrix),
    }
    write(args.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")))
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    if !args.gamma.is_finite() {
        return Err(Failure::input("--gamma must be finite"));
    }
    let l = solve_levels(args.gamma, &args.a, &args.b)?;
    let doc = json!({
        "gamma": args.gamma,
        "a": args.a,
        "b": args.b,
        "roots": l.roots,
        "vectors": l.vectors.iter().map(output::vector).collect::<Vec<_>>(),
        "quartic": l.quartic,
        "root_residuals": l.root_residuals,
        "vector_residuals": l.vector_residuals,
    });
    write(args.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")))
}

fn cmd_scan(args: &ScanArgs) -> Result<(), Failure> {
    let (lo, hi) = (args.omega_min, args.omega_max);
    for x in [args.amplitude, args.z_field, args.exchange, lo, hi] {
        if !x.is_finite() {
            return Err(Failure::input("scan parameters must be finite"));
        }
    }
    if lo > hi {
        return Err(Failure::input("--omega-min must not exceed --omega-max"));
    }
    if lo <= 0.0 && hi >= 0.0 {
        return Err(Failure::input("the frequency range must exclude 0"));
    }
    if args.points == 0 {
        return Err(Failure::input("--points must be positive"));
    }
    configure_threads()?;
    let grid = omega_grid(lo, hi, args.points);
    let res = scan(args.amplitude, args.z_field, args.exchange, &grid, &ScanOptions::default())?;
    let gap = res.max_disagreement();
    if !(gap <= 1e-6) {
        return Err(Failure { code: 4, message: format!("closed-form and numerical maxima differ by {gap:e}") });
    }
    let n = output::number;
    let mut csv = String::from("omega,p14_max,p21_max,p24_max,p3_leak,t14,t21,t24\n");
    for r in &res.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            n(r.omega),
            n(r.p14),
            n(r.p21),
            n(r.p24),
            n(r.p3_leak),
            n(r.t14),
            n(r.t21),
            n(r.t24)
        );
    }
    write(args.out.as_deref(), &csv)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let outcomes = verify::run(args.quick, args.inject_fault);
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut failed = 0;
    for o in &outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        let detail = match &o.error {
            Some(e) => format!("error: {e}"),
            None => format!("{:.2e} < {:.0e}", o.worst, o.tolerance),
        };
        println!("{status}  {:width$}  {detail}  ({:.2} s)", o.name, o.seconds);
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        Err(Failure { code: 1, message: format!("{failed} invariant check(s) failed") })
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Propagate(a) => cmd_propagate(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("twospin: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
