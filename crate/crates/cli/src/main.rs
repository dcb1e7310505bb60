//! `extremal`: build algebras, reproduce the nilpotent-class tables, classify
//! pairs of extremal elements, generate inner ideals and check identities.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "extremal", version, about = "Extremal elements and inner ideals over GF(p) and Q")]
struct Cli {
    /// Output on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for every randomized check.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Construct an algebra, check Jacobi and write its structure-constant cache.
    Build(BuildArgs),
    /// Recompute the dim ad_x L / dim ad_x^2 L tables.
    Tables(TablesArgs),
    /// Classify the relation between two extremal elements.
    Pair(PairArgs),
    /// Inner ideal generated by elements, with Benkart check and shadow classification.
    Ideal(IdealArgs),
    /// Enumerate extremal points and check the point-line space axioms.
    Geometry(GeometryArgs),
    /// Randomized checks of the D-operator identities.
    Identities(IdentitiesArgs),
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    /// Root system label (A2, C2, F4, E8, ...) or sl<n>, sp<n>, so<n>.
    #[arg(long = "type")]
    type_label: String,
    /// 0 for the rationals, otherwise an odd prime.
    #[arg(long = "char")]
    characteristic: u32,
    /// Build L / Z(L) instead of L.
    #[arg(long)]
    quotient: bool,
    /// Cache directory; defaults to $EXTREMAL_CACHE_DIR, then ./extremal-cache.
    #[arg(long)]
    #[serde(skip)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
enum RegimeArg {
    #[value(name = "p>3", alias = "generic")]
    #[serde(rename = "p>3")]
    Generic,
    #[value(name = "p=3", alias = "three")]
    #[serde(rename = "p=3")]
    Three,
}

#[derive(Args, Debug, Serialize)]
struct TablesArgs {
    #[arg(long, value_enum)]
    regime: RegimeArg,
    /// Comma-separated characteristics.
    #[arg(long = "char", value_delimiter = ',', required = true)]
    chars: Vec<u32>,
    /// Run the raw inner-ideal closure without the Benkart early exit.
    #[arg(long)]
    no_shortcut: bool,
}

#[derive(Args, Debug, Serialize)]
struct PairArgs {
    /// Algebra, e.g. sl3,gf5 or F4,gf7.
    #[arg(long)]
    algebra: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    /// Exit with status 1 unless the relation is this one.
    #[arg(long)]
    expect: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct IdealArgs {
    #[arg(long)]
    algebra: String,
    /// Generator; repeat for several.
    #[arg(long = "generate", required = true, allow_hyphen_values = true)]
    generators: Vec<String>,
    #[arg(long)]
    no_shortcut: bool,
    /// Random elements for the Benkart check when P(I) is too large to scan.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Skip the extremal-point scan of P(I).
    #[arg(long)]
    no_shadow: bool,
    /// Exit with status 1 unless the ideal has this dimension.
    #[arg(long)]
    expect_dim: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct GeometryArgs {
    #[arg(long)]
    algebra: String,
    /// Stop enumerating after this many points.
    #[arg(long, default_value_t = 200_000)]
    cap: usize,
    /// Write the geometry (points, lines, axioms) as JSON.
    #[arg(long)]
    #[serde(skip)]
    export: Option<PathBuf>,
    /// Include the relation matrix in the export.
    #[arg(long)]
    relations: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum IdentityKind {
    Sympl,
    Orth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DomainArg {
    /// Arbitrary a, b.
    Any,
    /// B(a, b) = 0.
    Perp,
}

#[derive(Args, Debug, Serialize)]
struct IdentitiesArgs {
    #[arg(long, value_enum)]
    kind: IdentityKind,
    #[arg(long)]
    dim: usize,
    #[arg(long = "char")]
    characteristic: u32,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Sampling domain of (a, b) for the symplectic suite.
    #[arg(long, value_enum, default_value_t = DomainArg::Any)]
    domain: DomainArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Build(a) => commands::build(a),
        Command::Tables(a) => commands::tables(a),
        Command::Pair(a) => commands::pair(a),
        Command::Ideal(a) => commands::ideal(a, cli.seed),
        Command::Geometry(a) => commands::geometry(a),
        Command::Identities(a) => commands::identities(a, cli.seed),
    };
    match outcome {
        Ok(out) => report::emit(&cli, out),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
