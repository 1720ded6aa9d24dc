//! Command-line driver: solve instances, verify candidate pairs, project
//! points, evaluate quotients and certificates, generate random instances
//! and emit the bundled ones.
//!
//! Exit codes: 0 success / verified, 1 not verified / not converged,
//! 2 usage or parse error, 3 numeric failure (positivity, zero projection).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use socteicp::*;

#[derive(Parser)]
#[command(name = "socteicp", version, about = "second-order cone tensor eigenvalue complementarity tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    Spa,
    Grad,
    Subsym,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StartKind {
    Ones,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Nlp1,
    Subsym,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "spa")]
    alg: Alg,
    /// Relaxation factor of the projection step.
    #[arg(long, default_value_t = 5.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value = "ones")]
    start: StartKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Retries with fresh seeds after a vanished projection.
    #[arg(long, default_value_t = 0)]
    restarts: u64,
    #[arg(long, value_enum, default_value = "text")]
    output: OutputKind,
    /// Record the residual history (json output only).
    #[arg(long, default_value_t = false)]
    history: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance.
    Solve(SolveArgs),
    /// Verify a candidate eigenpair.
    Verify {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        lambda: f64,
        /// Comma-separated coordinates.
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Project a point onto the cone, or onto its compact basis.
    Project {
        /// Comma-separated block sizes.
        #[arg(long)]
        cones: String,
        #[arg(long)]
        x: String,
        /// Project onto K0 = K ∩ {e^T x = 1} instead of K.
        #[arg(long, default_value_t = false)]
        basis: bool,
    },
    /// Evaluate the generalized Rayleigh quotient.
    Rayleigh {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        x: String,
        /// Also print its gradient.
        #[arg(long, default_value_t = false)]
        grad: bool,
    },
    /// Multiplier certificate at a candidate point.
    Kkt {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        x: String,
        /// Eigenvalue; defaults to the Rayleigh quotient of x.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Natural residual of the variational inequality on the basis.
    Vi {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        x: String,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        cones: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_a: PathBuf,
        #[arg(long)]
        out_b: PathBuf,
    },
    /// Write a bundled instance to a directory.
    Examples {
        #[arg(long)]
        name: String,
        #[arg(long)]
        emit: PathBuf,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_NOT_VERIFIED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn usage_err(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: message.into() }
}

fn numeric_err(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_NUMERIC, message: message.into() }
}

fn parse_csv_f64(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage_err(format!("bad number `{t}`"))))
        .collect()
}

fn parse_csv_usize(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| usage_err(format!("bad integer `{t}`"))))
        .collect()
}

fn load(path: &std::path::Path) -> Result<Problem64, CliError> {
    load_problem(path).map_err(|e| match e {
        IoError::Problem(ProblemError::SignIndefinite { .. }) => {
            numeric_err(format!("{e}"))
        }
        other => usage_err(format!("{other}")),
    })
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn termination_str(t: Termination) -> &'static str {
    match t {
        Termination::Tolerance => "tolerance",
        Termination::MaxIter => "max_iter",
        Termination::ZeroProjection => "zero_projection",
        Termination::PositivityViolated => "positivity_violated",
    }
}

fn report_json(p: &Problem64, rep: &SolveReport<f64>) -> serde_json::Value {
    let _ = p;
    let r = &rep.pair.report;
    json!({
        "lambda": rep.pair.lambda,
        "x": rep.pair.x.values(),
        "iterations": rep.iterations,
        "relerr": r.relerr,
        "elapsed_ms": rep.elapsed.as_secs_f64() * 1e3,
        "converged": rep.converged,
        "termination": termination_str(rep.termination),
        "report": {
            "relerr": r.relerr,
            "complementarity": r.complementarity,
            "scale": r.scale,
            "membership_x": r.membership_x,
            "membership_w": r.membership_w,
            "block_complementarity": r.block_complementarity,
            "w": r.w.values(),
        },
        "history": rep.relerr_history,
    })
}

fn print_solve_text(rep: &SolveReport<f64>) {
    println!(
        "{:<8} {:>9} {:>12} {:>10} EigVector",
        "Iter.", "Time", "RelErr", "EigValue"
    );
    println!(
        "{:<8} {:>8.3}s {:>12.3e} {:>10.4} {}",
        rep.iterations,
        rep.elapsed.as_secs_f64(),
        rep.pair.report.relerr,
        rep.pair.lambda,
        fmt_vec(rep.pair.x.values()),
    );
    if !rep.converged {
        println!("not converged ({})", termination_str(rep.termination));
    }
}

fn run_solve(args: SolveArgs) -> Result<u8, CliError> {
    let p = load(&args.problem)?;
    let rep: SolveReport<f64> = match args.alg {
        Alg::Spa => {
            let mut attempt = 0u64;
            loop {
                let start = match (args.start, attempt) {
                    (StartKind::Ones, 0) => Start::Ones,
                    (StartKind::Ones, k) => Start::Random(args.seed + k),
                    (StartKind::Random, k) => Start::Random(args.seed + k),
                };
                let cfg = SpaConfig {
                    alpha: args.alpha,
                    tol: args.tol,
                    max_iter: args.max_iter,
                    start,
                    record_history: args.history,
                    ..Default::default()
                };
                match spa_solve(&p, &cfg) {
                    Ok(rep) => break rep,
                    Err(SolveError::ZeroProjection { .. }) if attempt < args.restarts => {
                        attempt += 1;
                        continue;
                    }
                    Err(e) => return Err(numeric_err(format!("{e}"))),
                }
            }
        }
        Alg::Grad => {
            let start = match args.start {
                StartKind::Ones => Start::Ones,
                StartKind::Random => Start::Random(args.seed),
            };
            let cfg = Nlp1Config { tol: args.tol, max_iter: args.max_iter, start };
            nlp1_solve(&p, &cfg).map_err(|e| numeric_err(format!("{e}")))?
        }
        Alg::Subsym => {
            let start = match args.start {
                StartKind::Ones => SubsymStart::OnesLift,
                StartKind::Random => SubsymStart::RandomLift(args.seed),
            };
            let cfg = SubsymConfig {
                tol: args.tol,
                max_iter: args.max_iter.min(200_000),
                start,
                ..Default::default()
            };
            let rep = subsym_solve(&p, &cfg).map_err(|e| numeric_err(format!("{e}")))?;
            rep.solve
        }
    };

    match args.output {
        OutputKind::Json => println!("{}", report_json(&p, &rep)),
        OutputKind::Text => print_solve_text(&rep),
    }
    Ok(if rep.converged { EXIT_OK } else { EXIT_NOT_VERIFIED })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Verify { problem, lambda, x, tol } => {
            let p = load(&problem)?;
            let xv = parse_csv_f64(&x)?;
            let (ok, rep) = p
                .verify(&xv, lambda, tol)
                .map_err(|e| usage_err(format!("{e}")))?;
            println!(
                "verified: {ok} (relerr {:.3e}, complementarity {:.3e}, scale {:.3e})",
                rep.relerr, rep.complementarity, rep.scale
            );
            println!("margins x: {}", fmt_vec(&rep.membership_x));
            println!("margins w: {}", fmt_vec(&rep.membership_w));
            Ok(if ok { EXIT_OK } else { EXIT_NOT_VERIFIED })
        }
        Command::Project { cones, x, basis } => {
            let blocks = parse_csv_usize(&cones)?;
            let st = ConeStructure::new(blocks).map_err(|e| usage_err(format!("{e}")))?;
            let xv = parse_csv_f64(&x)?;
            if xv.len() != st.total() {
                return Err(usage_err("point length does not match cone sizes"));
            }
            let out = if basis {
                project_basis(&xv, &st, 1e-12).map_err(|e| numeric_err(format!("{e}")))?
            } else {
                let bv = BlockVector::new(st, xv).map_err(|e| usage_err(format!("{e}")))?;
                project_cone(&bv).into_values()
            };
            println!("{}", fmt_vec(&out));
            Ok(EXIT_OK)
        }
        Command::Rayleigh { problem, x, grad } => {
            let p = load(&problem)?;
            let xv = parse_csv_f64(&x)?;
            let lam = p.rayleigh(&xv).map_err(|e| numeric_err(format!("{e}")))?;
            println!("lambda = {lam:.10}");
            if grad {
                let g = p.rayleigh_gradient(&xv).map_err(|e| numeric_err(format!("{e}")))?;
                println!("grad = {}", fmt_vec(&g));
            }
            Ok(EXIT_OK)
        }
        Command::Kkt { problem, x, lambda, which } => {
            let p = load(&problem)?;
            let xv = parse_csv_f64(&x)?;
            let e: Vec<f64> = p.structure().basis_vector();
            let trace: f64 = e.iter().zip(&xv).map(|(a, b)| a * b).sum();
            if trace <= 0.0 {
                return Err(numeric_err("e^T x must be positive"));
            }
            let x0: Vec<f64> = xv.iter().map(|v| v / trace).collect();
            match which {
                Which::Nlp1 => {
                    let cert =
                        nlp1_kkt_residual(&p, &x0).map_err(|e| numeric_err(format!("{e}")))?;
                    println!("beta  = {}", fmt_vec(&cert.beta));
                    println!("gamma = {}", fmt_vec(&cert.gamma));
                    println!("delta = {:.3e}", cert.delta);
                    println!("stationarity     = {:.3e}", cert.stationarity_residual);
                    println!("complementarity  = {:.3e}", cert.complementarity_residual);
                    println!("feasibility      = {:.3e}", cert.feasibility_residual);
                    println!("multipliers >= 0 : {}", cert.multipliers_nonnegative(1e-12));
                }
                Which::Subsym => {
                    let lam = match lambda {
                        Some(l) => l,
                        None => p.rayleigh(&x0).map_err(|e| numeric_err(format!("{e}")))?,
                    };
                    let pt =
                        subsym_lift(&p, &x0, lam).map_err(|e| numeric_err(format!("{e}")))?;
                    let (cert, identity) =
                        subsym_kkt_residual(&p, &pt).map_err(|e| numeric_err(format!("{e}")))?;
                    println!("f       = {:.3e}", pt.f_value);
                    println!("delta   = {:.3e}", cert.delta);
                    println!("eta     = {:.3e}", cert.eta.unwrap_or(f64::NAN));
                    println!("alpha   = {}", fmt_vec(cert.alpha.as_deref().unwrap_or(&[])));
                    println!("beta    = {}", fmt_vec(&cert.beta));
                    println!("mu      = {}", fmt_vec(cert.mu.as_deref().unwrap_or(&[])));
                    println!("theta   = {}", fmt_vec(cert.theta.as_deref().unwrap_or(&[])));
                    println!("stationarity     = {:.3e}", cert.stationarity_residual);
                    println!("complementarity  = {:.3e}", cert.complementarity_residual);
                    println!("feasibility      = {:.3e}", cert.feasibility_residual);
                    println!("identity         = {identity:.3e}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Vi { problem, x } => {
            let p = load(&problem)?;
            let xv = parse_csv_f64(&x)?;
            let e: Vec<f64> = p.structure().basis_vector();
            let trace: f64 = e.iter().zip(&xv).map(|(a, b)| a * b).sum();
            if trace <= 0.0 {
                return Err(numeric_err("e^T x must be positive"));
            }
            let x0: Vec<f64> = xv.iter().map(|v| v / trace).collect();
            let r = vi_residual(&p, &x0).map_err(|e| numeric_err(format!("{e}")))?;
            println!("natural residual = {r:.6e}");
            Ok(EXIT_OK)
        }
        Command::Gen { order, dim, cones, seed, out_a, out_b } => {
            let blocks = parse_csv_usize(&cones)?;
            let spec = RandomSpec { order, dim, blocks, seed };
            let p: Problem64 =
                generate_random_problem(&spec).map_err(|e| numeric_err(format!("{e}")))?;
            std::fs::write(&out_a, emit_tensor(p.a()))
                .map_err(|e| usage_err(format!("writing {}: {e}", out_a.display())))?;
            std::fs::write(&out_b, emit_tensor(p.b()))
                .map_err(|e| usage_err(format!("writing {}: {e}", out_b.display())))?;
            println!(
                "wrote {} and {} (cones {})",
                out_a.display(),
                out_b.display(),
                p.structure()
                    .blocks()
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            Ok(EXIT_OK)
        }
        Command::Examples { name, emit } => {
            let files = instances::bundle_files(&name)
                .ok_or_else(|| usage_err(format!("unknown bundled instance `{name}`")))?;
            std::fs::create_dir_all(&emit)
                .map_err(|e| usage_err(format!("creating {}: {e}", emit.display())))?;
            for (fname, contents) in files {
                let path = emit.join(fname);
                std::fs::write(&path, contents)
                    .map_err(|e| usage_err(format!("writing {}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            Ok(EXIT_OK)
        }
    }
}
