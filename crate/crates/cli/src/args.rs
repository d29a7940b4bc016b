use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "teleskope",
    version,
    about = "Betti numbers and structure of planar linkages with one telescopic leg"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Betti numbers, components and product decompositions.
    Analyze(LinkageArgs),
    /// `analyze` plus the grid oracle (n <= 5).
    Verify {
        #[command(flatten)]
        linkage: LinkageArgs,
        /// Starting grid resolution per angle; doubled while cells are ambiguous.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Betti profiles for every pair of chambers of the telescopic length.
    Sweep {
        /// Fixed leg lengths, comma separated.
        #[arg(long)]
        fixed: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Closed forms for n - 1 unit legs and a telescopic leg in [a, b].
    Equilateral {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Process a file of JSON records, one per line ("-" reads stdin).
    Batch {
        input: String,
    },
}

#[derive(Debug, Args)]
pub struct LinkageArgs {
    /// Fixed leg lengths, comma separated, as exact decimals.
    #[arg(long)]
    pub fixed: String,
    /// Telescopic range as `lo:hi`.
    #[arg(long)]
    pub tele: String,
    /// 1-based position of the telescopic leg among all legs (default: last).
    #[arg(long)]
    pub tele_index: Option<usize>,
    /// Strip circle factors repeatedly.
    #[arg(long)]
    pub recursive: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}
