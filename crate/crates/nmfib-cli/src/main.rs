use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod render;

#[derive(Parser)]
#[command(name = "nmfib", version, about = "Nmatrices, Boolean clones and fibring of classical fragments")]
struct Cli {
    /// Emit the structured verdict as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Accept system files whose designated set is empty or everything.
    #[arg(long, global = true)]
    allow_degenerate: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct Bounds {
    #[arg(long, default_value_t = 2)]
    universe_depth: usize,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse {
        formula: String,
        /// Read the signature from a system or fragment file.
        #[arg(long)]
        system: Option<PathBuf>,
        /// Also print the skeleton relative to this file's signature.
        #[arg(long)]
        skeleton: Option<PathBuf>,
    },
    /// Classify a Boolean connective.
    Classify {
        #[arg(long, required_unless_present = "name")]
        table: Option<String>,
        #[arg(long)]
        arity: Option<usize>,
        /// A standard connective name instead of a table.
        #[arg(long, conflicts_with = "table")]
        name: Option<String>,
    },
    /// Functional completeness and clone membership of a fragment.
    Clone {
        fragment: PathBuf,
        /// Decide membership of this table in the generated clone.
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Decide Γ ⊢ φ in a system, optionally filtering by rules.
    Entail {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value = "")]
        premises: String,
        #[arg(long)]
        conclusion: String,
        /// Calculus file whose rules valuations must respect.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Assert the system is saturated, making the filtered verdict exact.
        #[arg(long)]
        saturated: bool,
    },
    /// Strict product of two systems.
    Product { left: PathBuf, right: PathBuf },
    /// The n-th power of a system.
    Power {
        system: PathBuf,
        #[arg(long, short)]
        n: usize,
    },
    /// Pull a system back along connective definitions.
    Translate {
        system: PathBuf,
        /// `name/arity=body`, body over p1..pk.
        #[arg(long = "def", required = true)]
        defs: Vec<String>,
    },
    /// Search for a derivation.
    Derive {
        #[arg(long, required_unless_present = "builtin")]
        calculus: Option<PathBuf>,
        #[arg(long, conflicts_with = "calculus")]
        builtin: Option<String>,
        #[arg(long, default_value = "")]
        premises: String,
        #[arg(long)]
        goal: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Is classical logic recovered by fibring two fragments?
    DecideRecovery { f1: PathBuf, f2: PathBuf },
    /// Is functional completeness recovered by fibring two fragments?
    FcRecovery {
        f1: PathBuf,
        f2: PathBuf,
        #[arg(long, default_value_t = nmfib::fibring::DEFAULT_NMAX)]
        nmax: usize,
    },
    /// Search for a classically valid sequent refuted in the product.
    Witness {
        f1: PathBuf,
        f2: PathBuf,
        #[arg(long, default_value_t = nmfib::fibring::DEFAULT_WITNESS_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        power: usize,
    },
    /// Prove or refute Γ ⊢ φ in the fibring of two fragments.
    Certify {
        #[arg(long)]
        frag1: PathBuf,
        #[arg(long)]
        frag2: PathBuf,
        /// Calculus file with extra rules.
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long, default_value = "")]
        premises: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 2)]
        power: usize,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Probe k-determinedness of a fibring.
    Kdet {
        f1: PathBuf,
        f2: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        power: usize,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Re-run the checks of a catalogued example (`all` for every one).
    Reproduce { id: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = commands::Options { json: cli.json, allow_degenerate: cli.allow_degenerate };
    match commands::run(cli.command, &opts) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
