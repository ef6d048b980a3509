//! `k3w`: classify Weierstrass data, check GIT stability, list walls and
//! strata, and validate broken elliptic surfaces.
//!
//! Exit codes: 0 ok, 1 negative verdict, 2 input error, 3 internal
//! inconsistency.

mod commands;
mod schema;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "k3w",
    version,
    about = "Exact tools for Weierstrass elliptic K3 surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kodaira fibers of Weierstrass data or a marked triple.
    Classify {
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// GIT stability of a marked triple.
    GitCheck {
        input: String,
        /// Cross-check against the Hilbert-Mumford oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Wall table, or the fiber models at the weight of a query file.
    Walls {
        /// Only walls with value strictly above this rational.
        #[arg(long)]
        above: Option<String>,
        #[arg(long, conflicts_with = "above")]
        query: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Boundary strata of the weight just above 1/12.
    Strata {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        dim: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        max_n: Option<u32>,
        /// Print only the number of strata.
        #[arg(long)]
        count: bool,
        /// One stratum per pair exchanged by reversing the chain.
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a surface graph.
    Validate {
        input: String,
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Random Weierstrass data or a random marked triple as a document.
    GenRandom {
        #[arg(long, value_enum, default_value_t = RandomKind::Weierstrass)]
        kind: RandomKind,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Numerators are bounded by this in absolute value.
        #[arg(long, default_value_t = 5)]
        height: i64,
        #[arg(long, env = "K3W_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Print a document in canonical form.
    Fmt { input: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    General,
    EpsilonCatalog,
    BelowOneTwelfth,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RandomKind {
    Weierstrass,
    Triple,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    use k3w_core::strata::{Family, StrataError, StrataQuery};
    use k3w_core::surface::ValidationMode;
    match cli.command {
        Command::Classify { input, json } => commands::classify(&input, json),
        Command::GitCheck {
            input,
            oracle,
            json,
        } => commands::git_check(&input, oracle, json),
        Command::Walls { above, query, json } => match query {
            Some(path) => commands::weight_query(&path, json),
            None => commands::walls(above.as_deref(), json),
        },
        Command::Strata {
            family,
            dim,
            r,
            s,
            max_n,
            count,
            canonical,
            json,
        } => {
            // `II` names the Type II boundary, which has an II_INF stratum too.
            let families = match family.as_deref() {
                None => vec![None],
                Some(f) if f.eq_ignore_ascii_case("II") => {
                    vec![Some(Family::II), Some(Family::IIInf)]
                }
                Some(f) => vec![Some(
                    f.parse()
                        .map_err(|e: StrataError| CliError::Usage(e.to_string()))?,
                )],
            };
            let queries: Vec<StrataQuery> = families
                .into_iter()
                .map(|family| StrataQuery {
                    family,
                    dim,
                    r,
                    s,
                    max_n,
                    canonical,
                })
                .collect();
            commands::strata(&queries, count, json)
        }
        Command::Validate { input, mode, json } => {
            let mode = match mode {
                Mode::General => ValidationMode::General,
                Mode::EpsilonCatalog => ValidationMode::EpsilonCatalog,
                Mode::BelowOneTwelfth => ValidationMode::BelowOneTwelfth,
            };
            commands::validate(&input, mode, json)
        }
        Command::GenRandom {
            kind,
            n,
            height,
            seed,
        } => commands::gen_random(matches!(kind, RandomKind::Triple), n, height, seed),
        Command::Fmt { input } => commands::fmt(&input),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
