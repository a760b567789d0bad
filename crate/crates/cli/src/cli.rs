use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "biplane", version, about = "Construct, verify and analyse biplanes")]
pub struct Cli {
    /// Emit a single-line JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The known small biplanes.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Check that a design file is a symmetric design.
    Verify { design: PathBuf },
    /// The dual design (points and blocks exchanged).
    Dual {
        design: PathBuf,
        /// Write the dual to this file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Automorphism group order and generators.
    Aut { design: PathBuf },
    /// Isomorphism test via canonical certificates.
    Iso { first: PathBuf, second: PathBuf },
    /// Difference sets.
    Ds {
        #[command(subcommand)]
        action: DsCmd,
    },
    /// Certify the fixed-point lemmas for one automorphism or all of them.
    Fix(FixArgs),
    /// Admissible cycle types and Sylow bounds for a (121,16,2) biplane.
    Cert121 {
        /// Prime-power element order; omit for the full table.
        #[arg(long)]
        order: Option<u64>,
    },
    /// Check a (79,13,2) biplane against the automorphism classification.
    Cert79 {
        #[arg(long)]
        design: PathBuf,
    },
    /// Cartesian decompositions.
    Cart {
        #[command(subcommand)]
        action: CartCmd,
    },
    /// Positive solutions of 8x^2 - y^2 = 7.
    Pell {
        /// Recurrence index bound.
        #[arg(long, conflicts_with = "x_max", required_unless_present = "x_max")]
        n: Option<u32>,
        /// Report every solution with x at most this value.
        #[arg(long)]
        x_max: Option<u64>,
    },
    /// Exclusion of the degree c^2, c = q^2(q^2-1)/2, for q a power of 2.
    Psp4 {
        #[arg(long)]
        q: u64,
    },
    /// Parameter arithmetic and Bruck-Ryser-Chowla.
    Feasible {
        #[command(subcommand)]
        action: FeasibleCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    /// List every known entry.
    List,
    /// Build a constructible entry.
    Build {
        name: String,
        /// Write the design to this file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DsCmd {
    /// Exhaustive search, one set per equivalence class.
    Search {
        /// Group tag: cN, eN (N a power of 2), q8, or products such as c2xc8.
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: usize,
        /// Identify sets only up to translation, not group automorphisms.
        #[arg(long)]
        translations_only: bool,
    },
    /// Develop a difference set into a design.
    Develop {
        #[arg(long)]
        group: String,
        /// Comma-separated group element labels, e.g. 1,3,4,5,9.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
        /// Defaults to the value forced by k(k-1) = lambda(v-1).
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lander's exclusion test.
    Lander {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
    },
}

#[derive(Debug, Args)]
pub struct FixArgs {
    #[arg(long)]
    pub design: PathBuf,
    /// An automorphism in 1-based cycle notation.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub perm: Option<String>,
    /// Certify every non-identity element of the full automorphism group.
    #[arg(long)]
    pub all: bool,
    /// Point-transitive group containing the permutation, for the
    /// conjugacy-count bound.
    #[arg(long, requires = "perm")]
    pub group: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CartCmd {
    /// Verify a decomposition and its interaction with a design.
    Verify {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        cd: PathBuf,
        /// Group file; reports whether it preserves the decomposition.
        #[arg(long)]
        group: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FeasibleCmd {
    /// Biplane parameters for block size k, with the standard tests.
    Params {
        #[arg(long)]
        k: u64,
    },
    /// Bruck-Ryser-Chowla by Hilbert symbols and by bounded search.
    Brc {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
        /// Search radius; defaults to 4(k-lambda)lambda v.
        #[arg(long)]
        bound: Option<u64>,
    },
}
