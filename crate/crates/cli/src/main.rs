//! `gradalib`: command-line front end for graded module computations.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use report::error_report;

#[derive(Parser, Debug)]
#[command(name = "gradalib", version, about = "Graded modules over finite-dimensional algebras")]
struct Cli {
    /// Emit a canonical JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized steps.
    #[arg(long, global = true, env = "GRADALIB_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an algebra or module file.
    Check { file: PathBuf },
    /// Split a module into indecomposable summands.
    Decompose { module: PathBuf },
    /// Dimension of Hom(M, N), or of degree-k graded maps with `--degree`.
    Hom {
        m: PathBuf,
        n: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
    },
    /// Decide whether a module admits a grading.
    Gradable {
        module: PathBuf,
        /// Prüfer tower bound.
        #[arg(long, default_value_t = 8)]
        budget: usize,
        /// Largest dimension handed to the exhaustive oracle.
        #[arg(long, default_value_t = gradalib::gradability::ORACLE_MAX_DIM)]
        oracle_max_dim: usize,
        /// Exit 1 unless the verdict matches.
        #[arg(long, value_parser = ["gradable", "ungradable"])]
        expect: Option<String>,
        /// Write the grading certificate as a module file.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Degrees a..=b of the pull-up of a module.
    Pullup {
        module: PathBuf,
        /// Window `a:b`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Scan the Prüfer tower Y[1..=B] for new indecomposable classes.
    Prufer {
        module: PathBuf,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// First syzygy of a module.
    Syzygy {
        module: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Auslander-Bridger transpose, over the opposite algebra.
    Transpose {
        module: PathBuf,
        /// Directory receiving `algebra.toml` and `module.toml`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Positive-primitive formulas.
    Pp {
        #[command(subcommand)]
        op: PpCommand,
    },
    /// Indecomposables of bounded dimension over a finite field.
    Enumerate {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        max_dim: usize,
        #[arg(long)]
        graded: bool,
        #[arg(long, requires = "graded")]
        max_grl: Option<usize>,
        /// Directory receiving one module file per class.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        suite: Option<String>,
        #[arg(long)]
        all: bool,
        /// Directory receiving counterexamples.
        #[arg(long, default_value = "counterexamples")]
        out: PathBuf,
    },
}

/// Tuples are `;`-separated global vectors with `,`-separated entries;
/// matrices are `;`-separated rows of `,`-separated algebra elements.
#[derive(Subcommand, Debug)]
pub enum PpCommand {
    /// Whether a tuple satisfies `∃ȳ (x̄A = ȳB)`.
    Eval {
        module: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "")]
        b: String,
        #[arg(long)]
        tuple: String,
    },
    /// Whether pp^M(m̄) ⊆ pp^N(n̄), with a witnessing map.
    Leq {
        m: PathBuf,
        #[arg(long)]
        tuple: String,
        n: PathBuf,
        #[arg(long)]
        target_tuple: String,
    },
    /// A formula generating the pp-type of a tuple.
    Generator {
        module: PathBuf,
        #[arg(long)]
        tuple: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Decompose { .. } => "decompose",
            Command::Hom { .. } => "hom",
            Command::Gradable { .. } => "gradable",
            Command::Pullup { .. } => "pullup",
            Command::Prufer { .. } => "prufer",
            Command::Syzygy { .. } => "syzygy",
            Command::Transpose { .. } => "transpose",
            Command::Pp { op: PpCommand::Eval { .. } } => "pp eval",
            Command::Pp { op: PpCommand::Leq { .. } } => "pp leq",
            Command::Pp { op: PpCommand::Generator { .. } } => "pp generator",
            Command::Enumerate { .. } => "enumerate",
            Command::Verify { .. } => "verify",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = cli.command.name();
    let report = commands::run(&cli.command, cli.seed).unwrap_or_else(|e| error_report(name, cli.seed, &e));
    let out = if cli.json {
        report.to_json(start.elapsed())
    } else {
        report.to_text()
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    report.outcome.into()
}
