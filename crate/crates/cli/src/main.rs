use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fisher_core::kernel::Strategy;

mod commands;
mod report;

use report::{Failure, Format};

#[derive(Parser)]
#[command(
    name = "fisher",
    version,
    about = "Intersecting set families, kernel search and certificates"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Kernel search strategy: box or dfs.
    #[arg(long, global = true, default_value = "dfs")]
    pub strategy: Strategy,
    /// Largest |τ(i)| the kernel search may use.
    #[arg(long, global = true)]
    pub max_coeff: Option<u64>,
    /// Node budget for searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Return the canonical vector instead of the first one found.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check that all pairwise intersections have the same size.
    Verify { file: PathBuf },
    /// Reduction for a family containing a member of size k.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Search for a small nonzero τ with τᵀX = 0.
    Kernel {
        /// Matrix file (`m=.. n=..` header) or family file.
        file: PathBuf,
    },
    /// Box size H guaranteeing a collision; a table over m when --m is omitted.
    Siegel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        /// Bound on |X[i][j]|.
        #[arg(long, default_value_t = 1)]
        b: u64,
        /// Table rows, starting at m = n + 1.
        #[arg(long, default_value_t = 5)]
        rows: usize,
    },
    /// Replay the equation chain for a family and a kernel vector.
    Prove {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Comma-separated τ; searched for when omitted.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
    },
    /// Largest k-intersecting family on n <= 7 elements.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// ±1 colouring with discrepancy below 2t.
    BeckFiala { file: PathBuf },
    /// Biclique partitions of K_n.
    GrahamPollak {
        #[command(subcommand)]
        action: GpAction,
    },
    /// Write a family file.
    Generate {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
pub enum GpAction {
    Verify { file: PathBuf },
    Stars { n: usize },
    Min { n: usize },
}

#[derive(Subcommand)]
pub enum GenKind {
    NearPencil {
        #[arg(long)]
        n: usize,
    },
    ProjectivePlane {
        #[arg(long)]
        q: u64,
    },
    Sunflower {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Add the core itself as the first member.
        #[arg(long)]
        core: bool,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.global) {
        Ok(report) => report.emit(cli.global.format, cli.global.output.as_deref()),
        Err(Failure { code, message }) => {
            eprintln!("fisher: {message}");
            ExitCode::from(code)
        }
    }
}
