use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand};

use posetmc::embedding::EmbeddingHost;
use posetmc::format::{parse_graph, parse_poset, write_poset};
use posetmc::generators::{
    bench_instance, independent_poset, poset_of_graph, random_poset, stack_posets,
};
use posetmc::logic::eval_matrix;
use posetmc::oracle::OracleCaps;
use posetmc::reduction::{embed_with, model_check_with, CheckOptions};
use posetmc::{dilworth, parse, Poset, SolveStats, SolverKind};

/// Version tag of the bench CSV layout.
const CSV_SCHEMA: &str = "# posetmc-bench v1";
const CSV_HEADER: &str = "solver,q,p,width,branches,ops,usec,verdict";

#[derive(Parser)]
#[command(
    name = "posetmc",
    version,
    about = "Existential model checking and embedding on finite posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a poset satisfies an existential sentence.
    Check {
        /// Sentence text, e.g. "E x. E y. x <= y & !(y <= x)".
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        phi: Option<String>,
        /// File holding the sentence.
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, default_value_t = SolverKind::Clique)]
        solver: SolverKind,
        /// Print a satisfying assignment.
        #[arg(long)]
        witness: bool,
    },
    /// Decide whether the pattern poset embeds into the host poset.
    Embed {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value_t = SolverKind::Clique)]
        solver: SolverKind,
        #[arg(long)]
        witness: bool,
    },
    /// Print the width of a poset.
    Width {
        #[arg(long)]
        poset: PathBuf,
        /// Print a minimum chain partition, one chain per line.
        #[arg(long)]
        chains: bool,
        /// Print a maximum antichain.
        #[arg(long)]
        antichain: bool,
    },
    /// Write a generated poset to standard output.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Time the solvers on random instances and print CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        qsize: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "clique,csp")]
        solvers: Vec<SolverKind>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// K pairwise incomparable 3-chains.
    Independent { k: usize },
    /// The 3-chain-per-vertex poset of a graph file.
    PosetOfGraph { path: PathBuf },
    /// Ordinal sum of poset files, first file at the bottom.
    Stack {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Random poset: each pair i < j related with probability DENSITY, then closed.
    Random { n: usize, density: f64, seed: u64 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Check {
            phi,
            formula,
            poset,
            solver,
            witness,
        } => {
            let text = match (phi, formula) {
                (Some(t), _) => t,
                (None, Some(path)) => read(&path)?,
                (None, None) => bail!("one of --phi or --formula is required"),
            };
            let sentence = parse(&text).context("parsing the sentence")?;
            let p = load_poset(&poset)?;
            let opts = CheckOptions {
                solver,
                caps: OracleCaps::from_env()?,
                ..CheckOptions::default()
            };
            let outcome = model_check_with(&sentence, &p, &opts, &mut SolveStats::default())?;
            verdict(&mut out, outcome.holds)?;
            if let (true, Some(w)) = (witness, &outcome.witness) {
                ensure!(
                    eval_matrix(&sentence.matrix, &p, w)?,
                    "internal error: witness fails the matrix"
                );
                for (v, e) in sentence.vars.iter().zip(w) {
                    writeln!(out, "var {} -> {e}", v.name)?;
                }
            }
            Ok(exit(outcome.holds))
        }
        Command::Embed {
            pattern,
            host,
            solver,
            witness,
        } => {
            let q = load_poset(&pattern)?;
            let p = load_poset(&host)?;
            let found = if p.is_empty() {
                q.is_empty().then(|| posetmc::EmbeddingMap(Vec::new()))
            } else {
                let h = EmbeddingHost::new(&p)?;
                let opts = CheckOptions {
                    solver,
                    caps: OracleCaps::from_env()?,
                    ..CheckOptions::default()
                };
                embed_with(&opts, &q, &h, &mut SolveStats::default())?
            };
            verdict(&mut out, found.is_some())?;
            if let (true, Some(map)) = (witness, &found) {
                ensure!(
                    map.is_embedding(&q, &p),
                    "internal error: witness is not an embedding"
                );
                for (a, b) in map.as_slice().iter().enumerate() {
                    writeln!(out, "{a} -> {b}")?;
                }
            }
            Ok(exit(found.is_some()))
        }
        Command::Width {
            poset,
            chains,
            antichain,
        } => {
            let p = load_poset(&poset)?;
            let cert = dilworth(&p)?;
            ensure!(
                cert.verify(&p),
                "internal error: width certificate does not verify"
            );
            writeln!(out, "{}", cert.width())?;
            if chains {
                for c in cert.partition.chains() {
                    writeln!(out, "chain {}", join(c))?;
                }
            }
            if antichain {
                writeln!(out, "antichain {}", join(&cert.antichain))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { family } => {
            let (name, p) = match family {
                Family::Independent { k } => (format!("independent-{k}"), independent_poset(k)),
                Family::PosetOfGraph { path } => {
                    let g = parse_graph(&read(&path)?)
                        .with_context(|| format!("reading {}", path.display()))?;
                    ("graph-poset".to_string(), poset_of_graph(&g))
                }
                Family::Stack { paths } => {
                    let parts = paths
                        .iter()
                        .map(|p| load_poset(p))
                        .collect::<Result<Vec<_>>>()?;
                    ("stack".to_string(), stack_posets(&parts))
                }
                Family::Random { n, density, seed } => {
                    ensure!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");
                    (
                        format!("random-{n}-{density}-{seed}"),
                        random_poset(n, density, seed),
                    )
                }
            };
            out.write_all(write_poset(&name, &p).as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            sizes,
            qsize,
            width,
            repeats,
            seed,
            solvers,
        } => {
            ensure!(width >= 1, "--width must be positive");
            let caps = OracleCaps::from_env()?;
            writeln!(out, "{CSV_SCHEMA}")?;
            writeln!(out, "{CSV_HEADER}")?;
            for (si, &n) in sizes.iter().enumerate() {
                ensure!(n >= 1, "sizes must be positive");
                for r in 0..repeats {
                    let inst_seed = seed
                        .wrapping_mul(1_000_003)
                        .wrapping_add((si as u64) << 20)
                        .wrapping_add(r as u64);
                    let (q, p) = bench_instance(qsize, n, width, inst_seed);
                    let h = EmbeddingHost::new(&p)?;
                    for &solver in &solvers {
                        let opts = CheckOptions {
                            solver,
                            caps,
                            ..CheckOptions::default()
                        };
                        let mut stats = SolveStats::default();
                        let start = Instant::now();
                        let found = embed_with(&opts, &q, &h, &mut stats)?;
                        let usec = start.elapsed().as_micros();
                        writeln!(
                            out,
                            "{solver},{},{},{},{},{},{usec},{}",
                            q.len(),
                            p.len(),
                            h.width(),
                            stats.branches,
                            stats.ops,
                            if found.is_some() { "YES" } else { "NO" }
                        )?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_poset(path: &Path) -> Result<Poset> {
    let text = read(path)?;
    Ok(parse_poset(&text)
        .with_context(|| format!("invalid poset file {}", path.display()))?
        .poset)
}

fn verdict(out: &mut impl Write, yes: bool) -> io::Result<()> {
    writeln!(out, "{}", if yes { "YES" } else { "NO" })
}

fn exit(yes: bool) -> ExitCode {
    if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
