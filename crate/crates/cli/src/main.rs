mod commands;
mod parse;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit codes of the command-line contract.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const VERIFY_FAIL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CONSTRUCTION: u8 = 3;
    pub const INTERNAL: u8 = 4;
    pub const IO: u8 = 5;
}

#[derive(Parser, Debug)]
#[command(
    name = "berndt-forge",
    version,
    about = "Compute and verify closed forms of Berndt-type integrals, Ramanujan-type hyperbolic series and Barnes zeta values"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub prec_bits: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized parameter draws.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Decimal digits of agreement required for a pass.
    #[arg(long, global = true, default_value_t = 40)]
    pub tolerance_digits: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedKind {
    /// G_{p,2}(π), p = 4m-1
    G2,
    /// G'_{p,2}(π)
    Gprime2,
    /// Ḡ_{p,2}(π)
    Gbar1,
    /// X'_{p,3}(π)
    Xprime3,
    /// Σ (-1)^n (2n-1)^{4m-1} / cosh³((2n-1)π/2)
    Cosh3,
    /// ∫_0^∞ x^{4m-1} dx / [(cosh 2x - cos 2x)(cosh x + cos x)]
    Berndt,
    /// ζ₄(4m, 3 | 2+2i, 2-2i, 1+i, 1-i; +, +, -, -)
    Zeta4,
    /// The five rational constants of the Berndt closed form
    CCoefficients,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Integral,
    Lattice,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a coefficient polynomial table (families S, A, P, Q, R).
    Coeffs {
        family: String,
        /// Largest subscript (for R: largest p).
        max_index: usize,
    },
    /// Evaluate a hyperbolic series F_{p,m}(y).
    Series {
        /// G, Gprime, Gbar, X, Xprime, DXprime, Y, DY, B, DB
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Decimal, `pi`, or products/quotients such as `pi^2/2`.
        #[arg(long, default_value = "pi")]
        y: String,
    },
    /// Print an exact closed form in Γ(1/4), π and √2 with its value.
    ClosedForm {
        #[arg(value_enum)]
        kind: ClosedKind,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Integrate ∫_0^∞ x^{4m-1} dx / [(cosh 2x - cos 2x)(cosh x + cos x)] and compare with its closed form.
    Integral {
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Run a verification suite and emit a report.
    Verify {
        /// residues, transforms, elliptic, closedforms, integrals, barnes, tables, infrastructure, all
        suite: String,
        /// Write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Evaluate a Barnes multiple zeta value by the integral and/or lattice route.
    Barnes {
        /// Preset ζ₄(4m, 3 | 2+2i, 2-2i, 1+i, 1-i; +, +, -, -), checked against its closed form.
        #[arg(long, conflicts_with_all = ["s", "w", "periods", "signs"])]
        m: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        /// Comma-separated complex periods, e.g. `1+i,1-i`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        periods: Vec<String>,
        /// Comma-separated signs, e.g. `+,-`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        signs: Vec<String>,
        #[arg(long, value_enum, default_value_t = Route::Integral)]
        route: Route,
        /// Precision of the lattice route in bits.
        #[arg(long, default_value_t = berndt_core::verify::LATTICE_BITS)]
        lattice_bits: usize,
    },
    /// Write the document of worked examples (JSON or LaTeX).
    Report { out_path: PathBuf },
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure { code: exit::USAGE, message: msg.into() }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure { code: exit::IO, message: format!("{}: {e}", path.display()) }
    }
}

impl From<berndt_core::Error> for Failure {
    fn from(e: berndt_core::Error) -> Self {
        let code = match e {
            berndt_core::Error::Domain(_) => exit::USAGE,
            _ => exit::CONSTRUCTION,
        };
        Failure { code, message: e.to_string() }
    }
}

pub type CmdResult = Result<u8, Failure>;

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    if g.prec_bits < 64 {
        return Err(Failure::usage(format!("--prec-bits must be at least 64, got {}", g.prec_bits)));
    }
    match &cli.command {
        Command::Coeffs { family, max_index } => commands::coeffs(g, family, *max_index),
        Command::Series { family, p, m, y } => commands::series(g, family, *p, *m, y),
        Command::ClosedForm { kind, m } => commands::closed_form(g, *kind, *m),
        Command::Integral { m } => commands::integral(g, *m),
        Command::Verify { suite, out, timings } => commands::verify(g, suite, out.as_deref(), *timings),
        Command::Barnes { m, s, w, periods, signs, route, lattice_bits } => commands::barnes(
            g,
            &commands::BarnesArgs { m: *m, s: *s, w: w.as_deref(), periods, signs, route: *route, lattice_bits: *lattice_bits },
        ),
        Command::Report { out_path } => report::write(g, out_path),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.exit_code() == 0 { exit::PASS } else { exit::USAGE });
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("berndt-forge: internal error: {info}")));
    let code = match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(f)) => {
            eprintln!("berndt-forge: {}", f.message);
            f.code
        }
        Err(_) => exit::INTERNAL,
    };
    ExitCode::from(code)
}
