//! `skein`: exact computations in the twist-operator algebra and the
//! one-holed torus skein algebra, plus the verification suites.

mod checks;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{error_payload, exit_code, CliError, Outcome, RunReport, Status};

#[derive(Parser)]
#[command(name = "skein", version, about = "Exact skein-algebra computations and checks over Q(A)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Largest degree any operator-word expansion may reach.
    #[arg(long, default_value_t = 16, global = true)]
    degree_cap: usize,

    /// Seed for randomized reduction orders.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Recompute curve elements and products instead of reusing caches.
    #[arg(long, global = true)]
    no_memo: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a torus expression by literal rewriting, e.g. "z*y*x".
    Nf { expr: String },
    /// Product of two torus elements.
    Mul { lhs: String, rhs: String },
    /// Apply an operator word such as "T1 T2^-1" to a polynomial in X1, X2.
    Twist {
        word: String,
        expr: String,
        /// Act by the twist automorphisms on a torus element instead.
        #[arg(long)]
        torus: bool,
    },
    /// Image of a polynomial in X1, X2 under psi.
    Psi { expr: String },
    /// Generation witness for a curve "p,q" or for "boundary", re-verified.
    Witness {
        #[arg(allow_hyphen_values = true)]
        curve: String,
    },
    /// Run a verification suite.
    Check {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Ideal membership with a checked certificate.
    Member(MemberArgs),
    /// Dimension of the bounded-degree span of an ideal.
    Span(SpanArgs),
}

#[derive(Subcommand)]
pub enum Suite {
    /// psi(w(p)) = t_w(psi(p)) for all operator words up to a length.
    Equivariance {
        /// Longest operator word (at most 6).
        #[arg(long, default_value_t = 3)]
        max_word: usize,
    },
    /// The braiding identities and the vanishing of psi on relator elements.
    Braiding,
    /// The boundary element: separating-curve identity, centrality, invariance.
    Boundary,
    /// Every word of a length reduces to one normal form under random orders.
    Confluence {
        /// Word length (at most 8).
        #[arg(long, default_value_t = 6)]
        length: usize,
        /// Random reduction orders per word (at most 1000).
        #[arg(long, default_value_t = 100)]
        orders: usize,
    },
    /// Witnesses and path independence for every curve in a box.
    Witness {
        /// Curves with |p|, |q| up to this bound (at most 12).
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// Membership of a relator element, as for `member`.
    Membership(MemberArgs),
}

#[derive(Args)]
pub struct MemberArgs {
    /// "W Xi - Xi" for an operator word W, or any polynomial in X1, X2.
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    /// Largest span degree to use (at most 14).
    #[arg(long, default_value_t = 9)]
    pub degree: usize,
    /// Ideal generators separated by ';' (default: the two coxeter relators).
    #[arg(long, allow_hyphen_values = true)]
    pub generators: Option<String>,
    /// Write the certificate here as JSON.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpanArgs {
    #[arg(long)]
    pub degree: usize,
    /// Ideal generators separated by ';' (default: the two coxeter relators).
    #[arg(long, allow_hyphen_values = true)]
    pub generators: Option<String>,
}

/// Flags shared by every command.
pub struct Global {
    pub degree_cap: usize,
    pub seed: u64,
    pub memo: bool,
}

fn run(cmd: &Command, g: &Global) -> Result<Outcome, CliError> {
    match cmd {
        Command::Nf { expr } => commands::nf(expr),
        Command::Mul { lhs, rhs } => commands::mul(lhs, rhs),
        Command::Twist { word, expr, torus } => commands::twist(word, expr, *torus, g),
        Command::Psi { expr } => commands::psi(expr),
        Command::Witness { curve } => commands::witness(curve, g),
        Command::Check { suite } => checks::run(suite, g),
        Command::Member(a) => commands::member(a, g),
        Command::Span(a) => commands::span(a),
    }
}

fn name(cmd: &Command) -> String {
    match cmd {
        Command::Nf { .. } => "nf".into(),
        Command::Mul { .. } => "mul".into(),
        Command::Twist { .. } => "twist".into(),
        Command::Psi { .. } => "psi".into(),
        Command::Witness { .. } => "witness".into(),
        Command::Check { suite } => format!("check {}", checks::suite_name(suite)),
        Command::Member(_) => "member".into(),
        Command::Span(_) => "span".into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = Global {
        degree_cap: cli.degree_cap,
        seed: cli.seed,
        memo: !cli.no_memo,
    };
    let start = Instant::now();
    let outcome = run(&cli.command, &g);
    let timing_ms = start.elapsed().as_millis() as u64;

    let (report, text, code) = match outcome {
        Ok(o) => {
            let status = if o.ok { Status::Ok } else { Status::Failed };
            let code = if o.ok { 0 } else { 3 };
            let report = RunReport {
                command: name(&cli.command),
                inputs: o.inputs,
                result: o.result,
                status,
                timing_ms,
            };
            (report, Ok(o.text), code)
        }
        Err(e) => {
            let report = RunReport {
                command: name(&cli.command),
                inputs: json!({}),
                result: error_payload(&e),
                status: Status::Failed,
                timing_ms,
            };
            (report, Err(e.to_string()), exit_code(&e))
        }
    };

    match (cli.format, text) {
        (Format::Structured, _) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
        }
        (Format::Text, Ok(t)) => {
            println!("{t}");
            if report.status == Status::Failed {
                eprintln!("{}: FAILED", report.command);
            }
        }
        (Format::Text, Err(msg)) => eprintln!("error: {msg}"),
    }
    ExitCode::from(code as u8)
}
