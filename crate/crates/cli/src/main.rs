use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flexcut::augment::{exact_augment, near_min_cuts_cover, AugmentInstance};
use flexcut::family_cover::SolverSlots;
use flexcut::fgc::{exact_fgc, iterative_cover, solve_unit_cost, FlexInstance, KecssMode};
use flexcut::harness::{self, bench_corpus, run_suite, GenSpec, SuiteConfig, SUITES};
use flexcut::multigraph::io::Instance;

/// Near min-cut cover and (k,q)-flexible connectivity: generators, solvers,
/// exact oracles and verification suites.
#[derive(Parser)]
#[command(name = "flexcut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random instances to a directory.
    Gen(GenArgs),
    /// Run a verification suite and print its JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an approximation algorithm on one instance.
    Solve {
        #[command(subcommand)]
        problem: Problem,
    },
    /// Compute the exact optimum of one instance.
    Oracle {
        #[command(subcommand)]
        problem: Problem,
    },
    /// Solve every instance in a corpus directory against its oracle.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "approx2")]
        kecss: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Connected multigraphs from the generator parameters.
    Graph,
    /// Augmentation instances over all parity combinations.
    Augment,
    /// (k,q)-flex instances.
    Flex,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "graph")]
    kind: Kind,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 6)]
    min_nodes: usize,
    #[arg(long, default_value_t = 10)]
    max_nodes: usize,
    #[arg(long, default_value_t = 0.4)]
    density: f64,
    #[arg(long, default_value_t = 0.3)]
    unsafe_prob: f64,
    #[arg(long, default_value_t = 1)]
    min_cost: u64,
    #[arg(long, default_value_t = 10)]
    max_cost: u64,
    /// k and q written into graph instances.
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    q: u32,
    /// Only unit costs (flex kind).
    #[arg(long)]
    unit_cost: bool,
}

#[derive(Subcommand)]
enum Problem {
    /// Near min-cut cover: base edges plus candidates.
    Augment {
        #[arg(long)]
        input: PathBuf,
        /// Overrides the k stored in the instance.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value = "pd2")]
        single_level_solver: String,
    },
    /// (k,q)-flexible graph connectivity.
    Fgc {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        unit_cost: bool,
        #[arg(long, default_value = "approx2")]
        kecss: String,
    },
}

/// Exit status 1 on a failed invariant, 2 on usage and I/O errors.
enum Failure {
    Invariant(String),
    Usage(String),
}

impl From<flexcut::Error> for Failure {
    fn from(e: flexcut::Error) -> Self {
        match e {
            flexcut::Error::Internal(_) => Failure::Invariant(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(json: &serde_json::Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(json)? + "\n";
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn gen(a: &GenArgs) -> Result<(), Failure> {
    fs::create_dir_all(&a.out)?;
    let instances: Vec<Instance> = match a.kind {
        Kind::Graph => (0..a.count)
            .map(|i| {
                let spec = GenSpec {
                    min_nodes: a.min_nodes,
                    max_nodes: a.max_nodes,
                    density: a.density,
                    unsafe_prob: a.unsafe_prob,
                    min_cost: a.min_cost,
                    max_cost: a.max_cost,
                    seed: a.seed.wrapping_add(i as u64),
                    ..GenSpec::default()
                };
                harness::generate(&spec).map(|graph| Instance { graph, k: a.k, q: a.q })
            })
            .collect::<Result<_, _>>()?,
        Kind::Augment => harness::augment_corpus(a.seed, a.count)
            .into_iter()
            .map(|inst| Instance { graph: inst.graph, k: inst.k as u32, q: 0 })
            .collect(),
        Kind::Flex => harness::flex_corpus(a.seed, a.count, a.unit_cost)
            .into_iter()
            .map(|inst| Instance { graph: inst.graph, k: inst.k, q: inst.q })
            .collect(),
    };
    for (i, inst) in instances.iter().enumerate() {
        inst.write(a.out.join(format!("inst-{i:04}.txt")))?;
    }
    eprintln!("wrote {} instances to {}", instances.len(), a.out.display());
    Ok(())
}

fn solve(problem: &Problem, oracle: bool) -> Result<serde_json::Value, Failure> {
    match problem {
        Problem::Augment { input, k, single_level_solver } => {
            let inst = Instance::read(input)?;
            let k = u64::from(k.unwrap_or(inst.k));
            let aug = AugmentInstance::new(inst.graph, k)?;
            if oracle {
                Ok(serde_json::to_value(exact_augment(&aug)?)?)
            } else {
                let slots = SolverSlots::default().with_single_level(single_level_solver)?;
                Ok(serde_json::to_value(near_min_cuts_cover(&aug, &slots)?)?)
            }
        }
        Problem::Fgc { input, k, q, unit_cost, kecss } => {
            let inst = Instance::read(input)?;
            let flex = FlexInstance::new(inst.graph, k.unwrap_or(inst.k), q.unwrap_or(inst.q))?;
            let mode: KecssMode = kecss.parse()?;
            let sol = if oracle {
                exact_fgc(&flex)?
            } else if *unit_cost {
                solve_unit_cost(&flex, mode)?
            } else {
                iterative_cover(&flex, &SolverSlots::default(), mode)?
            };
            Ok(serde_json::to_value(sol)?)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(a) => gen(&a),
        Command::Verify { suite, seed, count, out } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown suite {suite:?}; expected one of {}",
                    SUITES.join(", ")
                )));
            }
            let mut cfg = SuiteConfig::default_for(&suite);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.count = count.unwrap_or(cfg.count);
            let report = run_suite(&suite, &cfg)?;
            emit(&serde_json::to_value(&report)?, out.as_deref())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Invariant(format!(
                    "{} failures; first: {}",
                    report.failures,
                    report.first_counterexample.unwrap_or_default()
                )))
            }
        }
        Command::Solve { problem } => emit(&solve(&problem, false)?, None),
        Command::Oracle { problem } => emit(&solve(&problem, true)?, None),
        Command::Bench { corpus, out, kecss } => {
            let mode: KecssMode = kecss.parse()?;
            let reports = bench_corpus(&corpus, &SolverSlots::default(), mode)?;
            emit(&serde_json::to_value(&reports)?, Some(&out))?;
            let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.id.clone()).collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(Failure::Invariant(format!("bound or feasibility violated on {}", bad.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
