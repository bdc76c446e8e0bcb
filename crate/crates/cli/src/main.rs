//! CLI for the almost r-embeddability decider.
//!
//! Exit codes: 0 on success, 1 on computation errors, 2 on usage errors.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use kampen_core::complex::{complete_bipartite, simplex_skeleton, tverberg_complex};
use kampen_core::deljoin::{point_from_str, point_to_string, retract_point};
use kampen_core::delprod::DeletedProduct;
use kampen_core::genmaps::{assemble_cocycle, sample_map_generic};
use kampen_core::verdict::{decide, DecideOptions};
use kampen_core::SimplicialComplex;

#[derive(Parser)]
#[command(
    name = "kampen",
    about = "Deleted products, intersection cocycles, and almost r-embeddability",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write output to a file instead of stdout.
    #[arg(long = "out", value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a corpus complex and print it in the complex file format.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build the deleted r-fold product and dump its cells, one per line.
    Delprod {
        /// Input complex file; stdin when omitted.
        file: Option<PathBuf>,
        #[arg(long = "r")]
        r: usize,
        /// Materialize only cells of this dimension and below.
        #[arg(long = "max-dim")]
        max_dim: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sample a generic map and print the intersection cocycle.
    Cocycle {
        file: Option<PathBuf>,
        #[arg(long = "r")]
        r: usize,
        #[arg(long = "d")]
        d: usize,
        #[arg(long = "seed", default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Retract points of the deleted join onto its simplicial model.
    Retract {
        /// Input points, one per line; stdin when omitted. The base complex
        /// must be supplied with --complex.
        file: Option<PathBuf>,
        #[arg(long = "r")]
        r: usize,
        /// Complex file defining the admissible supports.
        #[arg(long = "complex", value_name = "FILE")]
        complex: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decide almost r-embeddability and emit a report.
    Decide {
        file: Option<PathBuf>,
        #[arg(long = "r")]
        r: usize,
        #[arg(long = "d")]
        d: usize,
        #[arg(long = "seed", default_value_t = 1)]
        seed: u64,
        #[arg(long = "format", value_parser = ["json", "text"], default_value = "text")]
        format: String,
        /// Omit wall-clock timings, making the report byte-reproducible.
        #[arg(long = "no-timings")]
        no_timings: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The Tverberg complex: the full N-simplex, N = (d+1)(r-1).
    Tverberg { r: usize, d: usize },
    /// The k-skeleton of the full n-simplex.
    Skeleton { n: usize, k: usize },
    /// The complete bipartite graph K_{a,b}.
    Bipartite { a: usize, b: usize },
}

fn read_input(file: &Option<PathBuf>) -> anyhow::Result<String> {
    match file {
        Some(path) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
        }
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            Ok(buf)
        }
    }
}

fn write_output(out: &OutArg, text: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_complex(file: &Option<PathBuf>) -> anyhow::Result<SimplicialComplex> {
    let text = read_input(file)?;
    let k = SimplicialComplex::parse(&text)?;
    Ok(k)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen { what, out } => {
            let k = match what {
                GenCommand::Tverberg { r, d } => tverberg_complex(r, d)?,
                GenCommand::Skeleton { n, k } => simplex_skeleton(n, k),
                GenCommand::Bipartite { a, b } => {
                    if a < 1 || b < 1 {
                        bail!("bipartite parts must be >= 1");
                    }
                    complete_bipartite(a, b)
                }
            };
            write_output(&out, &k.serialize())
        }
        Command::Delprod {
            file,
            r,
            max_dim,
            out,
        } => {
            let k = load_complex(&file)?;
            let x = match max_dim {
                Some(hi) => DeletedProduct::build_range(&k, r, 0, hi)?,
                None => DeletedProduct::build(&k, r)?,
            };
            let mut text = String::new();
            for dim in x.materialized_dims().collect::<Vec<_>>() {
                for cell in x.cells(dim) {
                    text.push_str(&cell.to_string());
                    text.push('\n');
                }
            }
            write_output(&out, &text)
        }
        Command::Cocycle {
            file,
            r,
            d,
            seed,
            out,
        } => {
            let k = load_complex(&file)?;
            if k.is_empty() {
                bail!("cannot compute a cocycle on the empty complex");
            }
            let critical = d * (r - 1);
            let x = DeletedProduct::build_range(&k, r, critical.saturating_sub(1), critical + 1)?;
            let f = sample_map_generic(&k, &x, d, seed)?;
            let c = assemble_cocycle(&f, &x)?;
            let mut text = String::new();
            for (cell, value) in c.values() {
                text.push_str(&format!("{cell}\t{value}\n"));
            }
            write_output(&out, &text)
        }
        Command::Retract {
            file,
            r,
            complex,
            out,
        } => {
            let base = load_complex(&Some(complex))?;
            let input = read_input(&file)?;
            let mut text = String::new();
            for line in input.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let p = point_from_str(line, r, &base)?;
                let q = retract_point(&p)?;
                text.push_str(&point_to_string(&q));
                text.push('\n');
            }
            write_output(&out, &text)
        }
        Command::Decide {
            file,
            r,
            d,
            seed,
            format,
            no_timings,
            out,
        } => {
            let source = file
                .as_ref()
                .map(|p| p.display().to_string())
                .or(Some("-".to_string()));
            let k = load_complex(&file)?;
            if k.is_empty() {
                // Empty input is a usage error, not a computation error.
                clap::Error::raw(
                    clap::error::ErrorKind::ValueValidation,
                    "decide needs a non-empty complex as input\n",
                )
                .exit();
            }
            let mut report = decide(&k, &DecideOptions { r, d, seed, source })?;
            if no_timings {
                report.strip_timings();
            }
            let text = match format.as_str() {
                "json" => report.to_json(),
                _ => report.to_text(),
            };
            write_output(&out, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
