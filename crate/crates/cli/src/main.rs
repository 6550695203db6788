//! `ratreal`: build, classify, certify and factor rational matrix functions
//! stored as JSON documents.
//!
//! Exit codes: 0 success, 1 analysis answered "no", 2 malformed input,
//! 3 input outside the domain of the operation.

mod commands;
mod doc;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_complex::Complex64;
use ratreal_core::{GridConfig, ProductCheck, Tolerance};

use commands::{BuildClass, CliError, CmdResult, Context};

#[derive(Parser, Debug)]
#[command(name = "ratreal", version, about = "State-space tools for rational matrix functions")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Absolute tolerance for rank, definiteness and symmetry decisions.
    #[arg(long, global = true, env = "RATREAL_TOL_ABS", default_value_t = 1e-9)]
    tol_abs: f64,

    /// Relative tolerance, scaled by the norm of the quantity tested.
    #[arg(long, global = true, env = "RATREAL_TOL_REL", default_value_t = 1e-9)]
    tol_rel: f64,

    /// Number of log-spaced frequencies for axis classification.
    #[arg(long, global = true, default_value_t = GridConfig::default().points)]
    grid: usize,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = ProductCheck::default().seed)]
    seed: u64,

    /// Print the report as canonical JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble a realization from a factor or from odd / PO blocks.
    #[command(group(ArgGroup::new("class").required(true).args(["gpe", "odd", "po"])))]
    Build {
        /// Canonical even realization of G G^# from a factor document.
        #[arg(long)]
        gpe: bool,
        /// Odd realization from an odd_blocks document.
        #[arg(long)]
        odd: bool,
        /// Lossless realization from a po_blocks document.
        #[arg(long)]
        po: bool,
        /// With --gpe, replace D̂ so that the result is non-minimal.
        #[arg(long, requires = "gpe")]
        nonminimal: bool,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the function on the imaginary axis and report its classes.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Include every grid sample in the JSON report.
        #[arg(long)]
        emit_grid: bool,
    },
    /// Check a Lyapunov-type certificate against a realization.
    #[command(group(ArgGroup::new("which").required(true).args(["cert", "canonical"])))]
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Certificate document.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Use the canonical GPE pair for a 2n-state realization.
        #[arg(long)]
        canonical: bool,
        /// Write the certificate that was checked.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// McMillan degree, PBH witnesses and shared spectrum of A and L.
    Minimality {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also search for a feedthrough that separates spect(A) from spect(L).
        #[arg(long)]
        via_d: bool,
    },
    /// Static output feedback.
    Feedback {
        #[command(subcommand)]
        action: FeedbackAction,
    },
    /// Spectral factor of a canonical even realization or a scalar function.
    Factorize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare Ψ with G G^# at random points.
        #[arg(long)]
        verify: bool,
    },
    /// Evaluate at points given as `re` or `re,im`.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "at", required = true, allow_hyphen_values = true, value_parser = parse_point)]
        at: Vec<Complex64>,
    },
}

#[derive(Subcommand, Debug)]
enum FeedbackAction {
    /// Gain that moves every pole of a minimal realization.
    Design {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank test at the imaginary-axis eigenvalues of a strictly proper factor.
    Feasible {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Gain K = -αI that clears the axis from the Hamiltonian closed loop.
    Regularize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Close the loop u = K y + v around a realization or a factor's canonical build.
    Close {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gain: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got {s:?}")),
    }
}

fn context(g: &Global) -> Result<Context, CliError> {
    let tol = Tolerance::new(g.tol_abs, g.tol_rel).map_err(|e| CliError::Parse(e.to_string()))?;
    if g.grid < 2 {
        return Err(CliError::Parse("--grid needs at least 2 points".into()));
    }
    Ok(Context {
        tol,
        grid: GridConfig {
            points: g.grid,
            ..GridConfig::default()
        },
        seed: g.seed,
    })
}

fn run(cli: &Cli) -> CmdResult {
    let ctx = context(&cli.global)?;
    match &cli.command {
        Command::Build {
            gpe,
            odd,
            input,
            out,
            nonminimal,
            ..
        } => {
            let class = if *gpe {
                BuildClass::Gpe
            } else if *odd {
                BuildClass::Odd
            } else {
                BuildClass::Po
            };
            commands::build(&ctx, class, input, out.as_ref(), *nonminimal)
        }
        Command::Classify { input, emit_grid } => commands::classify(&ctx, input, *emit_grid),
        Command::Certify {
            input,
            cert,
            canonical,
            out,
        } => commands::certify(&ctx, input, cert.as_ref(), *canonical, out.as_ref()),
        Command::Minimality { input, via_d } => commands::minimality(&ctx, input, *via_d),
        Command::Feedback { action } => match action {
            FeedbackAction::Design { input, out } => commands::feedback_design(&ctx, input, out.as_ref()),
            FeedbackAction::Feasible { input } => commands::feedback_feasible(&ctx, input),
            FeedbackAction::Regularize { input, out } => {
                commands::feedback_regularize(&ctx, input, out.as_ref())
            }
            FeedbackAction::Close { input, gain, out } => {
                commands::feedback_close(&ctx, input, gain, out.as_ref())
            }
        },
        Command::Factorize { input, out, verify } => {
            commands::factorize(&ctx, input, out.as_ref(), *verify)
        }
        Command::Eval { input, at } => commands::eval(&ctx, input, at),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                print!("{}", doc::canonical_string(&out.report));
            } else {
                print!("{}", out.human);
            }
            ExitCode::from(if out.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
