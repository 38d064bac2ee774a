use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qsl_core::QuadricKind;

#[derive(Debug, Parser)]
#[command(name = "qsl", version, about = "Spreads of quadrics and affine vector space partitions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for or verify spreads
    #[command(subcommand)]
    Spread(SpreadCmd),
    /// Verify and classify avsps
    #[command(subcommand)]
    Avsp(AvspCmd),
    /// Convert between spread and avsp certificates
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Classify quadric sections
    #[command(subcommand)]
    Classify(ClassifyCmd),
    /// Structural checks on spreads
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Args)]
pub struct QuadricArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: QuadricKind,
    /// Projective dimension r of the ambient space
    #[arg(long)]
    pub dim: usize,
    /// Field order
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct ModeArgs {
    #[arg(long)]
    pub first: bool,
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub count: bool,
}

#[derive(Debug, Subcommand)]
pub enum SpreadCmd {
    Search {
        #[command(flatten)]
        quadric: QuadricArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        limit: Option<u64>,
        /// Fix the first candidate covering point 0
        #[arg(long)]
        seed_candidate: bool,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    Verify {
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum AvspCmd {
    Verify {
        input: PathBuf,
        /// Fail unless the avsp classifies as this kind
        #[arg(long, value_parser = parse_kind)]
        expect: Option<QuadricKind>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConvertCmd {
    SpreadToAvsp {
        input: PathBuf,
        /// Index of the distinguished member (default: last)
        #[arg(long)]
        sigma_last: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    AvspToSpread {
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassifyCmd {
    /// Classify the standard quadric restricted to a subspace
    Section {
        #[command(flatten)]
        quadric: QuadricArgs,
        /// Spanning rows, e.g. "1,0,0,0;0,1,0,0"
        #[arg(long)]
        rows: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    LemmaAux {
        input: PathBuf,
        /// Index of the member carrying P (default: last)
        #[arg(long)]
        sigma_last: Option<usize>,
        /// Coordinates of P (default: smallest point of the distinguished member)
        #[arg(long)]
        point: Option<String>,
        /// Rows spanning H (default: U meet P-perp for the default U)
        #[arg(long)]
        h: Option<String>,
    },
    SectionBound {
        input: PathBuf,
        /// Rows spanning one hyperplane (default: every non-degenerate hyperplane)
        #[arg(long)]
        hyperplane: Option<String>,
    },
}

fn parse_kind(s: &str) -> Result<QuadricKind, String> {
    s.parse().map_err(|e: qsl_core::Error| e.to_string())
}
