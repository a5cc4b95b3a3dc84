//! `mm-forge`: threshold tables, exception lists, bulk verification,
//! witnesses, constructions and self-tests.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mmforge::cache::{Cache, CACHE_ENV};
use mmforge::construction::{construct, find_mm_witness};
use mmforge::criteria::{pcb_decompositions, pcb_rejections, CheckEnv};
use mmforge::integer::{FactorBudget, Factorizer};
use mmforge::selftest::suite_registry;
use mmforge::survey::{exceptions, records_csv, table, table_csv, verify, FilterVariant};
use mmforge::Error;

#[derive(Parser)]
#[command(name = "mm-forge", version, about = "Exact finite-field survey toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Append-only factorization cache; the environment variable wins.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for Pollard rho.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Range {
    #[arg(long)]
    n1: u64,
    #[arg(long, default_value_t = 2)]
    q_min: u64,
    /// Defaults to 463 for n1 = 3 and 19 otherwise.
    #[arg(long)]
    q_max: Option<u64>,
}

impl Range {
    fn q_max(&self) -> u64 {
        self.q_max.unwrap_or(if self.n1 == 3 { 463 } else { 19 })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Least n2 satisfying the threshold inequality, per prime power q.
    Table(Range),
    /// Pairs (q, n2) left open by the table.
    Exceptions {
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value = "plain")]
        filter_variant: String,
    },
    /// Decide the bound inequality for every open pair.
    Verify {
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value = "plain")]
        filter_variant: String,
    },
    /// A primitive, completely normal element built from the least split.
    Witness {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// The translate set of completely normal elements.
    Construct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Run an invariant suite, or `all`.
    Selftest { suite: String },
}

/// Exit status for a library error: bad input is a usage error.
fn status(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::InvalidParameter(_)
            | Error::NotPrime(_)
            | Error::NotPrimePower(_)
            | Error::Unknown { .. }
            | Error::Precondition(_)
            | Error::NoSplit { .. }
            | Error::NonPositiveCoefficient { .. },
        ) => 2,
        _ => 1,
    }
}

fn json<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let g = &cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("thread pool")?;
    }
    let cache = Cache::from_config(g.cache_file.as_deref())?.map(Arc::new);
    let budget = FactorBudget { seed: g.seed, ..FactorBudget::default() };
    let env = CheckEnv { factorizer: Factorizer::new(budget, cache) };

    match &cli.command {
        Command::Table(r) => {
            let rows = table(r.n1, r.q_min, r.q_max())?;
            match g.format {
                Format::Csv => print!("{}", table_csv(&rows)),
                Format::Json => println!("{}", json(&rows)?),
            }
            Ok(0)
        }
        Command::Exceptions { range, filter_variant } => {
            let variant: FilterVariant = filter_variant.parse()?;
            let rows = table(range.n1, range.q_min, range.q_max())?;
            let recs = exceptions(&rows, variant)?;
            match g.format {
                Format::Csv => print!("{}", records_csv(&recs)),
                Format::Json => println!("{}", json(&recs)?),
            }
            eprintln!("{} pairs ({variant})", recs.len());
            Ok(0)
        }
        Command::Verify { range, filter_variant } => {
            let variant: FilterVariant = filter_variant.parse()?;
            let rows = table(range.n1, range.q_min, range.q_max())?;
            let mut recs = exceptions(&rows, variant)?;
            let summary = verify(&mut recs, &env)?;
            match g.format {
                Format::Csv => {
                    println!("total,passed,failed,failures_within_202");
                    println!(
                        "{},{},{},{}",
                        summary.total, summary.passed, summary.failed, summary.failures_within_small_degree
                    );
                    for (q, n2) in &summary.failures {
                        eprintln!("fails: q={q} n2={n2}");
                    }
                }
                Format::Json => println!("{}", json(&summary)?),
            }
            Ok(if summary.ok() { 0 } else { 1 })
        }
        Command::Witness { q, n } => {
            let splits = pcb_decompositions(*q, *n as u64)?;
            let Some(&(n1, n2)) = splits.first() else {
                let reasons = pcb_rejections(*q, *n as u64)?;
                return Err(Error::NoSplit { q: *q, n: *n, reason: reasons.join("; ") }.into());
            };
            let w = find_mm_witness(*q, *n, (n1 as usize, n2 as usize))?;
            println!("{}", json(&w)?);
            Ok(if w.verification.ok() { 0 } else { 1 })
        }
        Command::Construct { q, n } => {
            let (_, set) = construct(*q, *n)?;
            match g.format {
                Format::Csv => {
                    println!("member,coeffs,completely_normal");
                    for (i, (m, ok)) in set.members.iter().zip(&set.completely_normal).enumerate() {
                        let c: Vec<String> = m.coeffs().iter().map(u64::to_string).collect();
                        println!("{i},{},{ok}", c.join(" "));
                    }
                }
                Format::Json => println!("{}", json(&set)?),
            }
            Ok(if set.all_completely_normal() { 0 } else { 1 })
        }
        Command::Selftest { suite } => {
            let reg = suite_registry();
            let names: Vec<&str> = if suite == "all" { reg.names().collect() } else { vec![suite.as_str()] };
            let mut failed = 0;
            for name in names {
                let s = reg.get(name)?;
                for o in s.run()? {
                    println!("{name}: {} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                    failed += !o.passed as usize;
                }
            }
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(status(&e))
        }
    }
}
