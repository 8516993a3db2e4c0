use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use blochlab::homcalc::{DEFAULT_INTEGRAL_BUDGET, DEFAULT_TUPLE_BUDGET};
use blochlab::report::{run_cached, Cache, CacheOutcome, Job, Report, RunConfig};
use blochlab::rings::ZOO;
use blochlab::suites::{Suite, SuiteConfig, Verdict, DEFAULT_MAX_TORUS, DEFAULT_SEED};
use blochlab::Error;

#[derive(Parser)]
#[command(
    name = "blochlab",
    version,
    about = "Pre-Bloch groups, Milnor K-groups and group homology over finite rings"
)]
struct Cli {
    /// Largest cell count of a chain group that may be built.
    #[arg(long, global = true, default_value_t = DEFAULT_TUPLE_BUDGET)]
    budget_tuples: u64,
    /// Largest cell count for an integral boundary solve.
    #[arg(long, global = true, default_value_t = DEFAULT_INTEGRAL_BUDGET)]
    budget_solve: u64,
    /// Largest torus order accepted by the lemma53 suite.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TORUS)]
    max_torus: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized cases and cache revalidation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Report cache directory.
    #[arg(long, global = true, env = "BLOCHLAB_CACHE")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Pre-Bloch, Bloch and Milnor K-groups with their certificates.
    Bloch {
        #[arg(required = true)]
        rings: Vec<String>,
    },
    /// Run a verification suite, or `all` of them, on the given or default targets.
    Verify { suite: String, targets: Vec<String> },
    /// Integral or Z/m homology of a group given by a group spec.
    Homology {
        group: String,
        degree: usize,
        /// `Z`, `Z/m` or `m`.
        #[arg(default_value = "Z")]
        coeffs: String,
    },
    /// Ring descriptions.
    Ring {
        #[command(subcommand)]
        action: RingAction,
    },
    /// Inspect the report cache.
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Subcommand)]
enum RingAction {
    /// Describe the given rings.
    Info {
        #[arg(required = true)]
        rings: Vec<String>,
    },
    /// Describe the standard zoo.
    List,
}

#[derive(Subcommand)]
enum ReportAction {
    /// List cached reports.
    List,
    /// Print one cached report.
    Show { hash: String },
}

fn parse_coeffs(s: &str) -> Result<Option<u64>, Error> {
    let t = s.trim();
    if t == "Z" {
        return Ok(None);
    }
    let m = t.strip_prefix("Z/").unwrap_or(t);
    m.parse::<u64>()
        .map(Some)
        .map_err(|_| Error::Parse(format!("coefficients '{s}': expected Z, Z/m or m")))
}

fn jobs(command: &Command) -> Result<Vec<Job>, Error> {
    Ok(match command {
        Command::Bloch { rings } => rings.iter().map(|r| Job::Bloch { ring: r.clone() }).collect(),
        Command::Verify { suite, targets } => {
            let suites = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let mut out = Vec::new();
            for s in suites {
                let ts = if targets.is_empty() {
                    s.default_targets()
                } else {
                    targets.clone()
                };
                out.extend(ts.into_iter().map(|target| Job::Verify { suite: s, target }));
            }
            out
        }
        Command::Homology { group, degree, coeffs } => vec![Job::Homology {
            group: group.clone(),
            degree: *degree,
            modulus: parse_coeffs(coeffs)?,
        }],
        Command::Ring { action } => {
            let rings: Vec<String> = match action {
                RingAction::Info { rings } => rings.clone(),
                RingAction::List => ZOO.iter().map(|s| s.to_string()).collect(),
            };
            rings.into_iter().map(|ring| Job::RingInfo { ring }).collect()
        }
        Command::Report { .. } => unreachable!("handled before job construction"),
    })
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
    }
}

fn inspect_cache(cli: &Cli, action: &ReportAction) -> Result<ExitCode, Error> {
    let dir = cli
        .cache
        .clone()
        .ok_or_else(|| Error::Parse("no cache directory: pass --cache DIR or set BLOCHLAB_CACHE".into()))?;
    let cache = Cache::new(dir);
    match action {
        ReportAction::List => {
            let entries = cache.entries()?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&entries).expect("entries serialize")),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    w.write_record(["config_hash", "tool", "verdict", "jobs"])
                        .and_then(|_| {
                            entries.iter().try_for_each(|e| {
                                w.write_record([&e.config_hash, &e.tool, &e.verdict.to_string(), &e.jobs.join("; ")])
                            })
                        })
                        .map_err(|e| Error::Io(e.to_string()))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        ReportAction::Show { hash } => match cache.load(hash)? {
            Some(r) => {
                emit(&r, cli.format);
                Ok(ExitCode::SUCCESS)
            }
            None => Err(Error::Parse(format!(
                "no cached report {hash} in {}",
                cache.dir().display()
            ))),
        },
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    if let Command::Report { action } = &cli.command {
        return inspect_cache(cli, action);
    }
    let budgets = SuiteConfig {
        tuple_budget: cli.budget_tuples,
        solve_budget: cli.budget_solve,
        max_torus: cli.max_torus,
        seed: cli.seed,
    };
    let config = RunConfig::new(jobs(&cli.command)?, budgets);
    let cache = cli.cache.as_ref().map(Cache::new);
    let (report, outcome) = run_cached(&config, cache.as_ref())?;
    match outcome {
        CacheOutcome::Hit { revalidated } => {
            eprintln!(
                "cache hit {} (revalidated {})",
                report.config_hash,
                report.results[revalidated].job.label()
            )
        }
        CacheOutcome::Stale { revalidated } => eprintln!(
            "cache entry {} disagreed at {}; recomputed",
            report.config_hash,
            report.results[revalidated].job.label()
        ),
        CacheOutcome::Miss | CacheOutcome::Disabled => {}
    }
    emit(&report, cli.format);
    for r in &report.results {
        if r.outcome.verdict == Verdict::Budget {
            eprintln!(
                "{}: {} (raise --budget-tuples, --budget-solve or --max-torus)",
                r.job.label(),
                r.outcome.summary
            );
        }
    }
    Ok(ExitCode::from(report.verdict.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("blochlab: {e}");
            ExitCode::from(match e {
                Error::Budget { .. } => 3,
                Error::Parse(_) | Error::InvalidSpec(_) => 2,
                _ => 1,
            })
        }
    }
}
