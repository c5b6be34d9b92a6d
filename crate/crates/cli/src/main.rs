//! Command-line front end: runs the verification suites on a sphere spec and
//! reports PASS / FAIL / INCONCLUSIVE per check.

mod report;
mod sample;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nctoric::{spheres, AlgebraError, ManifoldSpec, Status, Theta};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use sha2::{Digest, Sha256};

use report::{Report, SpecInfo};
use suites::Context;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SPEC: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "nctoric", version, about = "Exact checks on theta-deformed spheres and their instanton")]
struct Cli {
    /// Built-in spec name (s4-theta, s7-theta) or path to a spec file.
    #[arg(long, global = true, default_value = "s4-theta")]
    spec: String,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Deformation parameter as a rational, e.g. 1/3; mu = exp(i pi theta).
    #[arg(long, global = true, default_value = "0", value_parser = parse_theta)]
    theta: BigRational,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Instanton charge for moduli-dim.
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    k: i64,
    /// Cap on rewriting steps per reduction.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Record wall-clock time per check (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Commutation table, central relations, confluence and calculus laws.
    VerifyAlgebra,
    /// Projection identities of the instanton and its Hopf lift.
    VerifyProjection,
    /// Curvature of the Grassmann connection.
    Curvature,
    /// Anti-self-duality certificate with a reversed-orientation control.
    SelfDual,
    /// Second Chern number.
    Charge,
    /// Integral, Hermitian structure and Sobolev norms.
    Norms,
    /// Index and moduli dimension for charge k.
    ModuliDim,
    /// The braiding on generators and random homogeneous pairs.
    BraidingDemo,
    /// Every suite applicable to the spec.
    All,
}

impl Command {
    fn suite(self) -> &'static str {
        match self {
            Command::VerifyAlgebra => "verify-algebra",
            Command::VerifyProjection => "verify-projection",
            Command::Curvature => "curvature",
            Command::SelfDual => "self-dual",
            Command::Charge => "charge",
            Command::Norms => "norms",
            Command::ModuliDim => "moduli-dim",
            Command::BraidingDemo => "braiding-demo",
            Command::All => "all",
        }
    }
}

fn parse_theta(s: &str) -> Result<BigRational, String> {
    let t: BigRational = s.trim().parse().map_err(|e| format!("not a rational number: {e}"))?;
    let f = t.to_f64().filter(|f| f.is_finite()).ok_or("theta out of range")?;
    Theta::new(f).ok_or("theta out of range")?;
    Ok(t)
}

/// Loads a built-in or on-disk spec; the error carries the exit code.
fn load_spec(arg: &str, max_iter: Option<usize>) -> Result<(ManifoldSpec, String), (u8, String)> {
    let src = match spheres::builtin_source(arg) {
        Some(src) => src.to_string(),
        None => std::fs::read_to_string(arg).map_err(|e| (EXIT_SPEC, format!("cannot read spec {arg}: {e}")))?,
    };
    let parsed = match max_iter {
        Some(cap) => ManifoldSpec::parse_with_cap(&src, cap),
        None => ManifoldSpec::parse(&src),
    };
    parsed.map(|spec| (spec, src)).map_err(|e: AlgebraError| {
        let code = if e.is_inconclusive() { EXIT_INCONCLUSIVE } else { EXIT_SPEC };
        (code, format!("invalid spec {arg}: {e}"))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let (spec, src) = match load_spec(&cli.spec, cli.max_iter) {
        Ok(x) => x,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let theta = Theta::new(cli.theta.to_f64().expect("validated")).expect("validated");
    let cx = Context { spec: &spec, seed: cli.seed, theta, k: cli.k, timings: cli.timings };
    let suite = cli.command.suite();
    let info = SpecInfo { name: spec.name().to_string(), sha256: format!("{:x}", Sha256::digest(src.as_bytes())) };
    let report = Report::new(suite, info, cli.seed, cli.theta.to_string(), suites::run(suite, &cx));
    print!("{}", report.render());
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    }
    ExitCode::from(match report.status {
        Status::Pass => 0,
        Status::Fail => EXIT_FAIL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    })
}
