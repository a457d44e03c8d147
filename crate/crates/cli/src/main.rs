//! `realvar` — compute all real roots of a polynomial system with finitely
//! many real solutions.
//!
//! Exit codes: 0 success (roots found or empty variety certified),
//! 2 when `t_max` was exhausted without a stopping order, 1 on errors.

use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use realvar_cli::corpus::Expected;
use realvar_cli::{corpus, json, parse_system, render};
use realvar_core::pp::Outcome;
use realvar_core::{solve, Mode, Policy, RankTolerance, SolveConfig};

#[derive(Parser)]
#[command(
    name = "realvar",
    about = "Real-root solver for polynomial systems via moment relaxations and prolongation-projection stopping tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a system from a file in the text format (see README).
    Solve(SolveArgs),
    /// Run systems from the embedded benchmark corpus.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Input file; `-` reads standard input.
    file: String,
    /// Root field: real (default, via the moment SDP) or complex.
    #[arg(long, default_value = "real")]
    mode: String,
    /// Stopping rule: dims (default), rank, or both (comparison report).
    #[arg(long, default_value = "dims")]
    criterion: String,
    /// Range policy for the stopping order s: extended (default) or strict.
    #[arg(long, default_value = "extended")]
    policy: String,
    /// Quotient basis selection strategy: greedy (default) or pivots.
    #[arg(long, default_value = "greedy")]
    basis: String,
    /// Starting prolongation order (>= max generator degree).
    #[arg(long)]
    t_start: Option<usize>,
    /// Order cap; default t_start + 8.
    #[arg(long)]
    t_max: Option<usize>,
    /// Keep computing this many orders past the stopping order.
    #[arg(long, default_value_t = 0)]
    t_extra: usize,
    /// Relative rank tolerance (default 1e-8; REALVAR_RANK_TOL overrides).
    #[arg(long)]
    rank_tol: Option<f64>,
    /// Gate on |Im| for accepting a root as real.
    #[arg(long)]
    imag_tol: Option<f64>,
    /// Residual gate for verified roots.
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Random seed for the extraction combination.
    #[arg(long, default_value_t = 20100815)]
    seed: u64,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Run every corpus entry.
    #[arg(long)]
    all: bool,
    /// Names of corpus entries to run.
    names: Vec<String>,
    /// List the corpus and exit.
    #[arg(long)]
    list: bool,
}

fn build_config(args: &SolveArgs) -> Result<SolveConfig> {
    let mode = match args.mode.as_str() {
        "real" => Mode::Real,
        "complex" => Mode::Complex,
        other => return Err(anyhow!("unknown mode '{other}' (expected real|complex)")),
    };
    let policy = match args.policy.as_str() {
        "extended" => Policy::Extended,
        "strict" => Policy::Strict,
        other => return Err(anyhow!("unknown policy '{other}' (expected strict|extended)")),
    };
    match args.criterion.as_str() {
        "dims" | "rank" | "both" => {}
        other => return Err(anyhow!("unknown criterion '{other}' (expected dims|rank|both)")),
    }
    let mut config = SolveConfig {
        mode,
        criterion: args.criterion.clone(),
        basis: args.basis.clone(),
        policy,
        t_start: args.t_start,
        t_max: args.t_max,
        t_extra: args.t_extra,
        seed: args.seed,
        ..Default::default()
    };
    // tolerance precedence: flag, then environment, then default
    let env_tol = std::env::var("REALVAR_RANK_TOL")
        .ok()
        .map(|v| {
            v.parse::<f64>()
                .context("REALVAR_RANK_TOL must be a number")
        })
        .transpose()?;
    if let Some(rel) = args.rank_tol.or(env_tol) {
        config.rank_tol = RankTolerance::relative(rel);
    }
    if let Some(v) = args.imag_tol {
        config.imag_tol = v;
    }
    if let Some(v) = args.residual_tol {
        config.residual_tol = v;
    }
    Ok(config)
}

fn run_solve(args: &SolveArgs) -> Result<u8> {
    let text = if args.file == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file))?
    };
    let sys = parse_system(&text).map_err(|e| anyhow!("{}: {}", args.file, e))?;
    let config = build_config(args)?;
    let result = solve(&sys, &config)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&json::report(&result))?);
    } else {
        print!("{}", render::render(&result));
    }
    Ok(match result.outcome {
        Outcome::Exhausted { .. } => 2,
        _ => 0,
    })
}

fn run_bench(args: &BenchArgs) -> Result<u8> {
    if args.list {
        for e in corpus::entries() {
            println!("{:<14} {}", e.name, e.blurb);
        }
        return Ok(0);
    }
    let names: Vec<String> = if args.all {
        corpus::entries().iter().map(|e| e.name.to_string()).collect()
    } else if args.names.is_empty() {
        return Err(anyhow!("give entry names or --all (see --list)"));
    } else {
        args.names.clone()
    };
    let mut failures = 0u8;
    for name in names {
        let entry = corpus::by_name(&name).ok_or_else(|| anyhow!("no corpus entry '{name}'"))?;
        let sys = parse_system(entry.source).map_err(|e| anyhow!("{name}: {e}"))?;
        let config = SolveConfig::default();
        let started = std::time::Instant::now();
        match solve(&sys, &config) {
            Ok(result) => {
                let (ok, status) = match (&result.outcome, entry.expect) {
                    (Outcome::Solved(ext), Expected::Solved { t, s, roots }) => (
                        (ext.t, ext.s, ext.roots.len()) == (t, s, roots),
                        format!(
                            "solved at ({}, {}), {} real roots, c(X) = {:.1e}",
                            ext.t,
                            ext.s,
                            ext.roots.len(),
                            ext.multiplication.commutativity_error
                        ),
                    ),
                    (Outcome::EmptyVariety { t, .. }, Expected::EmptyBy { t: cap }) => {
                        (*t <= cap, format!("empty real variety at t = {t}"))
                    }
                    (Outcome::Solved(ext), _) => (
                        false,
                        format!("solved at ({}, {}) but expected empty", ext.t, ext.s),
                    ),
                    (Outcome::EmptyVariety { t, .. }, _) => {
                        (false, format!("unexpected empty variety at t = {t}"))
                    }
                    (Outcome::Exhausted { t_max }, _) => {
                        (false, format!("exhausted t_max = {t_max}"))
                    }
                };
                if !ok {
                    failures += 1;
                }
                println!(
                    "{:<14} {:>8.1?}  {}  {}",
                    name,
                    started.elapsed(),
                    if ok { "pass" } else { "FAIL" },
                    status
                );
            }
            Err(e) => {
                failures += 1;
                println!("{:<14} FAILED: {}", name, e);
            }
        }
    }
    Ok(if failures > 0 { 2 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Bench(args) => run_bench(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
