use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qkrall::config::RunConfig;
use qkrall::report::{exit_code_for, run_suite, Command, Emitter, EXIT_INVALID_INPUT};

/// Exact q-Krall polynomial constructions and checks.
///
/// Exit status: 0 all checks pass, 1 a check failed, 2 invalid input.
#[derive(Parser)]
#[command(name = "qkrall", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate a family with its recurrence and eigenvalues.
    Families(Flags),
    /// Compare D-operator closed forms against their defining action.
    VerifyDop(Flags),
    /// Build q_n, beta_n, lambda_n and D^Q for a theorem.
    BuildKrall(Flags),
    /// Check D^Q q_n = lambda_n q_n and the operator order.
    VerifyEigen(Flags),
    /// Gram matrix of q_n against the theorem functional.
    VerifyOrthogonality(Flags),
    /// Minimal-order operator search for the conjectures.
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
}

#[derive(Subcommand)]
enum ConjectureCmd {
    A(Flags),
    B1(Flags),
    B2(Flags),
}

/// Flags mirror the JSON config keys; `--config` values win over flags.
#[derive(Args, Clone, Default)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// q-meixner, q-laguerre or al-salam-carlitz
    #[arg(long)]
    family: Option<String>,
    /// meixner-i, meixner-ii, meixner-iii, laguerre-i or laguerre-ii
    #[arg(long)]
    theorem: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// q^alpha
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<i64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// D-operator id, e.g. meixner-2
    #[arg(long)]
    id: Option<String>,
    #[arg(long, value_delimiter = ',')]
    f1: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    f2: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    f3: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    f: Option<Vec<usize>>,
    /// M_0,...,M_K
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    masses: Option<Vec<String>>,
    #[arg(long)]
    h_max: Option<usize>,
    #[arg(long)]
    order_max: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    denom_power: Option<usize>,
    #[arg(long)]
    n_search: Option<usize>,
    /// index=value
    #[arg(long)]
    inject_sigma: Option<String>,
    /// index=value
    #[arg(long)]
    inject_beta: Option<String>,
}

impl Flags {
    fn into_config(self) -> qkrall::Result<RunConfig> {
        let flags = RunConfig {
            family: self.family,
            theorem: self.theorem,
            q: self.q,
            b: self.b,
            c: self.c,
            t: self.t,
            a: self.a,
            alpha: self.alpha,
            k: self.k,
            m: self.m,
            n: self.n,
            id: self.id,
            f1: self.f1,
            f2: self.f2,
            f3: self.f3,
            f: self.f,
            masses: self.masses,
            h_max: self.h_max,
            order_max: self.order_max,
            order: self.order,
            d: self.d,
            denom_power: self.denom_power,
            n_search: self.n_search,
            inject_sigma: self.inject_sigma,
            inject_beta: self.inject_beta,
            out: self.out,
        };
        match self.config {
            Some(p) => Ok(flags.overlay(RunConfig::from_path(&p)?)),
            None => Ok(flags),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, flags) = match cli.command {
        Cmd::Families(f) => (Command::Families, f),
        Cmd::VerifyDop(f) => (Command::VerifyDop, f),
        Cmd::BuildKrall(f) => (Command::BuildKrall, f),
        Cmd::VerifyEigen(f) => (Command::VerifyEigen, f),
        Cmd::VerifyOrthogonality(f) => (Command::VerifyOrthogonality, f),
        Cmd::Conjecture(ConjectureCmd::A(f)) => (Command::ConjectureA, f),
        Cmd::Conjecture(ConjectureCmd::B1(f)) => (Command::ConjectureB1, f),
        Cmd::Conjecture(ConjectureCmd::B2(f)) => (Command::ConjectureB2, f),
    };
    let cfg = match flags.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let (report, elapsed) = match run_suite(cmd, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error of the run
    let _ = write!(stdout, "{}", report.summary());
    let emitter = match Emitter::new(cfg.out.as_deref()) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    match emitter.emit(&report, elapsed) {
        Ok(paths) if paths.is_empty() => {
            let _ = write!(stdout, "{}", report.to_json());
        }
        Ok(paths) => {
            for p in paths {
                let _ = writeln!(stdout, "wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    }
    eprintln!("elapsed {elapsed:.2}s");
    ExitCode::from(report.exit_code())
}
