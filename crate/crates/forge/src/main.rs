//! `uniformity-forge`: construct and verify mixed orthogonal arrays,
//! difference schemes, and k-uniform states; decide AME nonexistence by
//! exact shadow inequalities; keep a provenance catalog of everything.
//!
//! Exit codes: 0 success/pass, 1 verification failure (witness on stderr),
//! 2 malformed input or usage error.

mod builtin;
mod catalog;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ConstructCtx, Outcome, VerifyMode};

#[derive(Parser)]
#[command(name = "uniformity-forge", version, about)]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify an array (.moa), state (.qst), or difference scheme (.ds).
    Verify {
        path: PathBuf,
        /// Exhaustive strength-K check of an array file.
        #[arg(long, value_name = "K", conflicts_with_all = ["uniform", "scheme", "irreducible"])]
        strength: Option<u32>,
        /// K-uniformity check of a state file (or of the uniform
        /// superposition over an array file's rows).
        #[arg(long, value_name = "K", conflicts_with_all = ["scheme", "irreducible"])]
        uniform: Option<u32>,
        /// Difference-scheme check at the strength claimed in the header.
        #[arg(long, conflicts_with = "irreducible")]
        scheme: bool,
        /// Local-irreducibility certificate over the .qst files in a
        /// directory.
        #[arg(long)]
        irreducible: bool,
    },
    /// Build new artifacts; outputs are verified and cataloged.
    Construct {
        /// Skip post-construction verification.
        #[arg(long, global = true)]
        no_verify: bool,
        /// Output path (a directory for `basis`).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        op: ConstructOp,
    },
    /// Shadow-inequality report for one dimension vector or a full scan.
    Shadow {
        /// Local dimensions, e.g. `3 2 2 2 2 2 2 2 2`.
        dims: Vec<u32>,
        /// Scan all nonincreasing dimension vectors: `--scan N MAX_DIM`.
        #[arg(long, num_args = 2, value_names = ["N", "MAX_DIM"])]
        scan: Option<Vec<usize>>,
    },
    /// Inspect the artifact catalog.
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
}

#[derive(Subcommand)]
enum ConstructOp {
    /// Expansive replacement of one column by a simple strength-2 array.
    Replace {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        col: usize,
        #[arg(long)]
        a2: String,
    },
    /// Kronecker-sum extension of a homogeneous array by a difference
    /// scheme (`--ghm` accepts a file, `hadamard:M`, or `prime:P`).
    Kron {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        ghm: String,
        /// Interpret the scheme file entries as +1/-1.
        #[arg(long)]
        pm_one: bool,
    },
    /// Strength-3 extension of `(A1 | A2)` by schemes `D` and `H`.
    Strength3 {
        #[arg(long)]
        a1: Option<String>,
        #[arg(long)]
        a2: String,
        #[arg(long)]
        d_scheme: Option<String>,
        #[arg(long)]
        h: String,
        #[arg(long)]
        pm_one: bool,
    },
    /// Split a column of composite level d1*d2 into two columns.
    Split {
        #[arg(long, value_name = "FILE")]
        input: String,
        #[arg(long)]
        col: usize,
        #[arg(long)]
        d1: u32,
        #[arg(long)]
        d2: u32,
    },
    /// Delete columns (comma-separated indices).
    Delete {
        #[arg(long, value_name = "FILE")]
        input: String,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<usize>,
    },
    /// Uniform superposition state from an irredundant array.
    State {
        #[arg(long, value_name = "FILE")]
        input: String,
        #[arg(short)]
        k: u32,
    },
    /// Generalized-Pauli orbit basis of a minimum-support state.
    Basis {
        #[arg(long, value_name = "FILE")]
        input: String,
        #[arg(short)]
        k: u32,
    },
    /// Projective measurement on one party, keeping one outcome.
    Reduce {
        #[arg(long, value_name = "FILE")]
        input: String,
        #[arg(long)]
        party: usize,
        #[arg(long)]
        outcome: u32,
        /// Verify the result at this uniformity level.
        #[arg(long)]
        check_uniform: Option<u32>,
    },
    /// Coarse-grain two parties into one.
    Merge {
        #[arg(long, value_name = "FILE")]
        input: String,
        #[arg(short)]
        i: usize,
        #[arg(short)]
        j: usize,
        #[arg(long)]
        check_uniform: Option<u32>,
    },
    /// Party-wise tensor product of two states.
    Tensor {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        check_uniform: Option<u32>,
    },
}

#[derive(Subcommand)]
enum CatalogOp {
    /// List all entries.
    List,
    /// Show one entry by id (unique prefixes accepted).
    Show { id: String },
    /// Remove entries whose files have vanished.
    Gc,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Verify {
            path,
            strength,
            uniform,
            scheme,
            irreducible,
        } => {
            if irreducible {
                return commands::cmd_certify(&path, cli.json);
            }
            let mode = match (strength, uniform, scheme) {
                (Some(k), None, false) => VerifyMode::Strength(k),
                (None, Some(k), false) => VerifyMode::Uniform(k),
                (None, None, true) => VerifyMode::Scheme,
                _ => anyhow::bail!(
                    "choose exactly one of --strength K, --uniform K, --scheme, --irreducible"
                ),
            };
            commands::cmd_verify(&path, mode, cli.json)
        }
        Command::Construct { no_verify, out, op } => {
            let ctx = ConstructCtx {
                out,
                no_verify,
                json: cli.json,
            };
            match op {
                ConstructOp::Replace { a1, col, a2 } => {
                    commands::construct_replace(&ctx, &a1, col, &a2)
                }
                ConstructOp::Kron { a1, ghm, pm_one } => {
                    commands::construct_kron(&ctx, &a1, &ghm, pm_one)
                }
                ConstructOp::Strength3 {
                    a1,
                    a2,
                    d_scheme,
                    h,
                    pm_one,
                } => commands::construct_strength3(
                    &ctx,
                    a1.as_deref(),
                    &a2,
                    d_scheme.as_deref(),
                    &h,
                    pm_one,
                ),
                ConstructOp::Split { input, col, d1, d2 } => {
                    commands::construct_split(&ctx, &input, col, d1, d2)
                }
                ConstructOp::Delete { input, cols } => {
                    commands::construct_delete(&ctx, &input, &cols)
                }
                ConstructOp::State { input, k } => commands::construct_state(&ctx, &input, k),
                ConstructOp::Basis { input, k } => commands::construct_basis(&ctx, &input, k),
                ConstructOp::Reduce {
                    input,
                    party,
                    outcome,
                    check_uniform,
                } => commands::construct_reduce(&ctx, &input, party, outcome, check_uniform),
                ConstructOp::Merge {
                    input,
                    i,
                    j,
                    check_uniform,
                } => commands::construct_merge(&ctx, &input, i, j, check_uniform),
                ConstructOp::Tensor { a, b, check_uniform } => {
                    commands::construct_tensor(&ctx, &a, &b, check_uniform)
                }
            }
        }
        Command::Shadow { dims, scan } => match scan {
            Some(args) => {
                if !dims.is_empty() {
                    anyhow::bail!("--scan takes no positional dimensions");
                }
                commands::cmd_shadow_scan(args[0], args[1] as u32, cli.json)
            }
            None => commands::cmd_shadow(&dims, cli.json),
        },
        Command::Catalog { op } => match op {
            CatalogOp::List => commands::cmd_catalog_list(cli.json),
            CatalogOp::Show { id } => commands::cmd_catalog_show(&id, cli.json),
            CatalogOp::Gc => commands::cmd_catalog_gc(cli.json),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
