use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "dehnfill",
    version,
    about = "Isomorphism of marked groups via characteristic Dehn fillings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Print a machine-readable JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Budget file with `key = value` lines; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub budgets: BudgetFlags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic core of one peripheral subgroup.
    Core {
        file: PathBuf,
        #[arg(long)]
        peripheral: String,
        #[arg(short = 'i', long = "level")]
        level: usize,
    },
    /// Characteristic Dehn filling, written in the group file format.
    Fill {
        file: PathBuf,
        #[arg(short = 'i', long = "level")]
        level: usize,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Abelianization and homomorphism counts into the catalog.
    Fingerprint { file: PathBuf },
    /// Decide whether a word is trivial.
    Wp { file: PathBuf, word: String },
    /// Compare two marked groups.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        max_level: Option<usize>,
        /// Also write the verdict record to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a stored verdict record.
    Verify { certificate: PathBuf },
}

#[derive(Debug, Args)]
pub struct BudgetFlags {
    /// Search nodes per homomorphism enumeration or count.
    #[arg(long, global = true)]
    pub hom_node_budget: Option<u64>,
    /// Largest permutation group a closure may build.
    #[arg(long, global = true)]
    pub closure_order_cap: Option<u64>,
    /// Extra length a word-problem derivation may grow by.
    #[arg(long, global = true)]
    pub wp_conjugator_length: Option<usize>,
    /// Relator factors a word-problem derivation may use.
    #[arg(long, global = true)]
    pub wp_factor_count: Option<usize>,
    /// Nodes for each isomorphism search strategy.
    #[arg(long, global = true)]
    pub tietze_node_cap: Option<u64>,
    /// Largest presentation size the Tietze search keeps.
    #[arg(long, global = true)]
    pub tietze_size_cap: Option<usize>,
    /// Time limit for compare.
    #[arg(long, global = true)]
    pub wall_clock_seconds: Option<u64>,
    /// Run every search on the calling thread.
    #[arg(long, global = true)]
    pub serial: bool,
}
