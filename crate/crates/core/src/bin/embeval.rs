use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use embeval::analysis::{emit_matrix, MatrixFormat};
use embeval::run::{correlate, inspect, resolve_jobs, run, RunConfig};
use embeval::synthgen::{default_suite, generate, FixtureSet};
use embeval::vecstore::VectorFormat;
use embeval::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_EVAL: u8 = 4;

#[derive(Parser)]
#[command(name = "embeval", version, about = "Evaluate word embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a config and write the report bundle.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// Report directory (default: `out` from the config, else ./reports).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; falls back to the config, then EMBEVAL_JOBS, then the CPU count.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        /// Matrix formats, comma separated: csv, json.
        #[arg(long, value_delimiter = ',')]
        format: Vec<String>,
    },
    /// Correlation matrix of a long-format score table.
    Correlate {
        /// Score table CSV (model,metric,kind,direction,value).
        table: PathBuf,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Write synthetic fixtures with planted structure.
    GenFixtures {
        /// TOML file of [[fixture]] tables; a built-in suite if absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides every fixture's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Vector format: text or binary.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Vocabulary, dimension, norms and nearest neighbours.
    InspectVectors {
        path: PathBuf,
        /// Words to probe.
        probes: Vec<String>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
    },
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) => EXIT_CONFIG,
        Error::Input { .. } | Error::Io(_) => EXIT_INPUT,
        _ => EXIT_EVAL,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_for(&e))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Eval {
            config,
            out,
            seed,
            jobs,
            format,
        } => {
            let mut cfg = match RunConfig::from_path(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if !format.is_empty() {
                cfg.formats = format;
            }
            let jobs = match resolve_jobs(jobs.map(|j| j as usize).or(cfg.jobs)) {
                Ok(j) => j,
                Err(e) => return fail(e),
            };
            let dir = out.or_else(|| cfg.out_dir()).unwrap_or_else(|| PathBuf::from("reports"));
            let bundle = match run(&cfg, jobs) {
                Ok(b) => b,
                Err(e) => return fail(e),
            };
            if let Err(e) = bundle.write(&dir) {
                return fail(e);
            }
            print!("{}", bundle.summary());
            println!("reports written to {}", dir.display());
            if bundle.failures().next().is_some() {
                return ExitCode::from(EXIT_EVAL);
            }
            ExitCode::SUCCESS
        }
        Command::Correlate { table, out, format } => {
            let Some(fmt) = MatrixFormat::parse(&format) else {
                return fail(Error::Config(format!("unknown format {format:?}")));
            };
            let bytes = match fs::read(&table) {
                Ok(b) => b,
                Err(e) => return fail(Error::Input {
                    path: table.display().to_string(),
                    source: Box::new(e.into()),
                }),
            };
            let matrix = match correlate(&bytes) {
                Ok(m) => m,
                Err(e) => return fail(Error::Input {
                    path: table.display().to_string(),
                    source: Box::new(e),
                }),
            };
            let rendered = match emit_matrix(&matrix, fmt) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            match out {
                Some(p) => {
                    if let Err(e) = fs::write(&p, rendered) {
                        return fail(e.into());
                    }
                }
                None => print!("{}", String::from_utf8_lossy(&rendered)),
            }
            ExitCode::SUCCESS
        }
        Command::GenFixtures {
            config,
            out,
            seed,
            format,
        } => {
            let binary = match VectorFormat::parse(&format) {
                Some(VectorFormat::Binary) => true,
                Some(VectorFormat::Text) => false,
                _ => return fail(Error::Config(format!("fixtures are written as text or binary, not {format:?}"))),
            };
            let mut set = match config {
                Some(p) => match fs::read_to_string(&p) {
                    Ok(src) => match FixtureSet::from_toml(&src) {
                        Ok(s) => s,
                        Err(e) => return fail(e),
                    },
                    Err(e) => return fail(Error::Input {
                        path: p.display().to_string(),
                        source: Box::new(e.into()),
                    }),
                },
                None => default_suite(seed.unwrap_or(embeval::run::DEFAULT_SEED)),
            };
            if let Some(s) = seed {
                set.fixtures.iter_mut().for_each(|f| f.seed = s);
            }
            for named in &set.fixtures {
                let written = generate(&named.spec()).and_then(|f| f.write_with(&out.join(&named.name), binary));
                match written {
                    Ok(paths) => {
                        for p in paths {
                            println!("{}", p.display());
                        }
                    }
                    Err(e) => return fail(e),
                }
            }
            ExitCode::SUCCESS
        }
        Command::InspectVectors { path, probes, format, k } => {
            let Some(fmt) = VectorFormat::parse(&format) else {
                return fail(Error::Config(format!("unknown vector format {format:?}")));
            };
            match fmt.load_path(&path) {
                Ok(store) => {
                    print!("{}", inspect(&store, &probes, k, 50));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
