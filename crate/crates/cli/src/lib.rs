//! The `mucut` command line: batch checks, experiments and the selftest.
//!
//! [`run_with_io`] is the whole program; `main` only wires it to the process
//! streams. Exit codes: 0 success, 1 malformed input, 2 domain error or a
//! failed selftest.

mod commands;
mod input;
mod output;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mucut_core::operator::VanishingRange;
use mucut_core::report::SCHEMA;
use mucut_core::{Parity, SymbolVariant};

pub use output::Format;

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const SEED_ENV: &str = "MUCUT_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mucut", version, about = "Exact checks for Szegő commutants, symbols and toric cuts")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Random seed; overrides MUCUT_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Full,
    Even,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Full => Parity::Full,
            ParityArg::Even => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    MPlusEven,
    MPlusPlus,
}

impl From<VariantArg> for SymbolVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::MPlusEven => SymbolVariant::MPlusEven,
            VariantArg::MPlusPlus => SymbolVariant::MPlusPlus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RangeArg {
    Exact,
    UniformNegative,
}

impl From<RangeArg> for VanishingRange {
    fn from(r: RangeArg) -> Self {
        match r {
            RangeArg::Exact => VanishingRange::Exact,
            RangeArg::UniformNegative => VanishingRange::UniformNegative,
        }
    }
}

#[derive(Args, Debug)]
struct OperatorArgs {
    /// Operator JSON, inline or as a path (`-` for stdin).
    operator: String,
    #[arg(long, value_enum, default_value_t = ParityArg::Full)]
    parity: ParityArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does the operator commute with the projector? Lists the nonzero
    /// commutator entries otherwise.
    CommutantCheck(OperatorArgs),
    /// Ladder factorization of a commuting operator.
    Factorize(OperatorArgs),
    /// Checks Raise^k = e^{ikθ}(D+1)⋯(D+k) for k = 1..=k-max.
    IdentityPk {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=200))]
        k_max: u32,
    },
    /// Eigenvalues of the compression to modes 0..=N.
    Spectrum {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(short = 'n', long = "window", default_value_t = 64)]
        n: usize,
    },
    /// Eigenvalue counts against the cut-space volume.
    Weyl {
        /// Operator JSON, inline or as a path.
        operator: String,
        #[arg(short = 'n', long = "window", default_value_t = 4096)]
        n: usize,
        /// Largest λ on the grid; defaults to min σ(N/2).
        #[arg(long)]
        lambda_max: Option<f64>,
        /// Number of equally spaced grid points in (0, lambda-max].
        #[arg(long, default_value_t = 256)]
        points: usize,
        /// Residual bound recorded as `within_tolerance`.
        #[arg(long, default_value_t = 1.0)]
        tolerance: f64,
    },
    /// Residue of a degree −1 symbol, or a log fit of partial diagonal sums.
    Residue {
        /// Symbol JSON: contour residue.
        #[arg(long, conflicts_with_all = ["inverse_of", "diagonal"])]
        symbol: Option<String>,
        /// Diagonal operator JSON: fit the diagonal 1/q₀(n), n = 1..=N.
        #[arg(long, conflicts_with = "diagonal")]
        inverse_of: Option<String>,
        /// JSON array of diagonal entries d₁, d₂, …
        #[arg(long)]
        diagonal: Option<String>,
        #[arg(short = 'n', long = "window", default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        fit_lo: usize,
        /// Defaults to the number of diagonal entries.
        #[arg(long)]
        fit_hi: Option<usize>,
    },
    /// Does a jet extend smoothly to the cut space?
    JetExtend { jet: String },
    /// Pullback of an even jet to a symbol in (s, θ).
    Pullback {
        jet: String,
        #[arg(long, value_enum, default_value_t = VariantArg::MPlusEven)]
        variant: VariantArg,
    },
    /// Jet of an admissible polynomial symbol.
    Pushforward {
        symbol: String,
        #[arg(long, value_enum, default_value_t = VariantArg::MPlusEven)]
        variant: VariantArg,
    },
    /// The lens cone cone((1,0), (p,q)) and its normal form.
    ConeLens { p: i64, q: i64 },
    /// Intersects a cone with {⟨·, λ⟩ ≥ 0}.
    ConeCut {
        cone: String,
        /// Normal λ as `[a, b]`.
        normal: String,
    },
    /// Compares normal forms of two cones.
    ConeEquiv {
        first: String,
        second: String,
        /// Only allow determinant +1 maps.
        #[arg(long)]
        oriented: bool,
    },
    /// Facet normals reproducing a cone by cuts from the plane.
    ConePlan { cone: String },
    /// Runs every invariant check with a fixed seed.
    Selftest {
        #[arg(long, value_enum)]
        inject_fault: Option<selftest::Fault>,
        #[arg(long, value_enum, default_value_t = RangeArg::Exact)]
        vanishing_range: RangeArg,
    },
}

/// Why a command did not produce a report.
#[derive(Debug)]
pub(crate) enum Failure {
    Malformed(String),
    Domain { kind: String, message: String },
}

impl Failure {
    pub(crate) fn domain<E: std::fmt::Debug + std::fmt::Display>(e: E) -> Self {
        Failure::Domain { kind: error_kind(&e), message: e.to_string() }
    }

    fn exit_code(&self) -> i32 {
        match self {
            Failure::Malformed(_) => EXIT_MALFORMED,
            Failure::Domain { .. } => EXIT_DOMAIN,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let (kind, message) = match self {
            Failure::Malformed(m) => ("MalformedInput", m.as_str()),
            Failure::Domain { kind, message } => (kind.as_str(), message.as_str()),
        };
        json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message } })
    }
}

/// Variant name of an error enum, taken from its `Debug` form and looking
/// through `Operator(...)` wrappers.
fn error_kind<E: std::fmt::Debug>(e: &E) -> String {
    let text = format!("{e:?}");
    let mut name = text.as_str();
    while let Some(inner) = name.strip_prefix("Operator(") {
        name = inner;
    }
    name.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => {
            v.trim().parse().map_err(|_| Failure::Malformed(format!("{SEED_ENV}={v:?} is not an unsigned integer")))
        }
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run_with_io<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = resolve_seed(cli.seed).and_then(|seed| commands::execute(&cli.command, seed));
    let (out, code) = match result {
        Ok(out) => {
            let code = if out.success { EXIT_OK } else { EXIT_DOMAIN };
            (out, code)
        }
        Err(f) => {
            let _ = writeln!(
                stderr,
                "mucut: {}",
                match &f {
                    Failure::Malformed(m) => m.clone(),
                    Failure::Domain { message, .. } => message.clone(),
                }
            );
            (output::Output::flat(f.to_json()), f.exit_code())
        }
    };
    let text = out.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "mucut: cannot write report: {e}");
        return EXIT_MALFORMED;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds() {
        use mucut_core::cut::CutError;
        use mucut_core::symbol::SymbolError;
        use mucut_core::OperatorError;
        assert_eq!(error_kind(&CutError::OddJet { k: 1, l: 0 }), "OddJet");
        assert_eq!(error_kind(&OperatorError::NotInCommutant(Parity::Full)), "NotInCommutant");
        let nested = SymbolError::Operator(OperatorError::ZeroOperator);
        assert_eq!(error_kind(&nested), "ZeroOperator");
    }
}
