//! `tristrat`: command-line front end of the model checker.
//!
//! Exit status of `check`: 0 when the verdict is true, 1 when false, 2 when
//! undefined, and 3 on any tool error (bad input, budget exhausted, ...).
//! Other subcommands exit with 0 on success and 3 on error.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use tristrat::abstraction::{abstract_model, partition_by_atoms, Partition};
use tristrat::bench::random::atom_names;
use tristrat::bench::{
    compression_table, compression_text, definedness, gen_random_formula, gen_scheduler_with, RunReport,
    SchedulerPartition,
};
use tristrat::eval::{check2, check3};
use tristrat::model::{load_document, Model, ModelDocument};
use tristrat::reduction::check_split;
use tristrat::{parse, Config, Error, Formula, ReleaseMode, TruthValue};

const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "tristrat", version, about = "Strategy Logic model checking with three-valued abstraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a formula on a model and print the verdict.
    Check(CheckArgs),
    /// Print the scheduler benchmark model as JSON.
    GenScheduler(GenSchedulerArgs),
    /// Print a corpus of random one-binding sentences, one per line.
    GenFormulas(GenFormulasArgs),
    /// Scheduler compression table and definedness experiment.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    /// Two-valued semantics on a concrete model.
    Direct2,
    /// Three-valued semantics.
    Direct3,
    /// Satisfaction and violation checks on two concrete models.
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Release {
    Literal,
    Standard,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionKind {
    WaitingCluster,
    AtomAgreement,
}

impl From<PartitionKind> for SchedulerPartition {
    fn from(k: PartitionKind) -> Self {
        match k {
            PartitionKind::WaitingCluster => SchedulerPartition::WaitingCluster,
            PartitionKind::AtomAgreement => SchedulerPartition::AtomAgreement,
        }
    }
}

#[derive(Args)]
struct Settings {
    /// Strategy evaluation budget; defaults to TRISTRAT_BUDGET or 10^7.
    #[arg(long)]
    budget: Option<u64>,
    /// Time limit per check in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Reading of the release operator.
    #[arg(long, value_enum, default_value = "literal")]
    release: Release,
}

impl Settings {
    fn config(&self) -> Config {
        let mut cfg = Config::from_env().with_release(match self.release {
            Release::Literal => ReleaseMode::Literal,
            Release::Standard => ReleaseMode::Standard,
        });
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        cfg.timeout = self.timeout.map(Duration::from_secs_f64);
        cfg
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Model document; read from standard input when omitted.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Formula text or a file containing it; defaults to the formula
    /// embedded in the model document.
    #[arg(long)]
    formula: Option<String>,
    /// Check the quotient abstraction of the concrete model instead.
    #[arg(long = "abstract")]
    abstraction: bool,
    /// Partition file (JSON list of blocks of state names); defaults to the
    /// partition embedded in the model document.
    #[arg(long, conflicts_with = "partition_atoms")]
    partition: Option<PathBuf>,
    /// Partition grouping states that agree on these atoms.
    #[arg(long, value_delimiter = ',')]
    partition_atoms: Option<Vec<String>>,
    /// Defaults to direct3 for three-valued or abstracted models and to
    /// direct2 otherwise.
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Args)]
struct GenSchedulerArgs {
    /// Number of processes (at least 2).
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "waiting-cluster")]
    partition: PartitionKind,
}

#[derive(Args)]
struct GenFormulasArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    min_depth: usize,
    #[arg(long, default_value_t = 5)]
    max_depth: usize,
    /// Take agent and atom names from this model document.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Agent names, used when no model is given.
    #[arg(long, value_delimiter = ',', default_value = "a0,a1")]
    agents: Vec<String>,
    /// Atom names, used when no model is given.
    #[arg(long, value_delimiter = ',')]
    atoms: Option<Vec<String>>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 2)]
    from: usize,
    #[arg(long, default_value_t = 7)]
    to: usize,
    #[arg(long, value_enum, default_value = "waiting-cluster")]
    partition: PartitionKind,
    /// Also run the random-formula definedness experiment with this many
    /// formulas.
    #[arg(long)]
    definedness: Option<usize>,
    /// Scheduler size for the definedness experiment.
    #[arg(long, default_value_t = 3)]
    definedness_n: usize,
    /// Strategy evaluation budget per formula in the definedness experiment.
    #[arg(long, default_value_t = 200_000)]
    formula_budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    settings: Settings,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => check(args),
        Command::GenScheduler(args) => gen_scheduler_cmd(args).map(|_| 0),
        Command::GenFormulas(args) => gen_formulas(args).map(|_| 0),
        Command::Report(args) => report(args).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<(Vec<u8>, String), Error> {
    match path {
        Some(p) => fs::read(p)
            .map(|b| (b, p.display().to_string()))
            .map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| Error::Parse(format!("standard input: {e}")))?;
            Ok((buf, "<stdin>".to_string()))
        }
    }
}

/// Formula text, taken from a file when `arg` names one.
fn formula_text(arg: &str) -> Result<String, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn exit_code(v: TruthValue) -> u8 {
    match v {
        TruthValue::True => 0,
        TruthValue::False => 1,
        TruthValue::Undef => 2,
    }
}

fn check(args: CheckArgs) -> Result<u8, Error> {
    let cfg = args.settings.config();
    let (bytes, source) = read_input(args.model.as_deref())?;
    let doc = load_document(&bytes)?;
    let text = match (&args.formula, &doc.formula) {
        (Some(f), _) => formula_text(f)?,
        (None, Some(f)) => f.clone(),
        (None, None) => return Err(Error::Parse("no formula given and none embedded in the model".into())),
    };
    let phi: Formula = parse(&text)?;

    let mut abstraction = None;
    let mut abstraction_time = None;
    let model = if args.abstraction {
        let Model::Concrete(g) = &doc.model else {
            return Err(Error::Validation("--abstract needs a concrete model".into()));
        };
        let part = if let Some(atoms) = &args.partition_atoms {
            partition_by_atoms(g, atoms)?
        } else if let Some(path) = &args.partition {
            let (bytes, _) = read_input(Some(path))?;
            let blocks: Vec<Vec<String>> =
                serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("partition: {e}")))?;
            Partition::from_names(g, &blocks)?
        } else if let Some(blocks) = &doc.partition {
            Partition::from_names(g, blocks)?
        } else {
            return Err(Error::InvalidPartition("no partition given and none embedded in the model".into()));
        };
        let start = Instant::now();
        let (a, rep) = abstract_model(g, &part)?;
        abstraction_time = Some(start.elapsed());
        abstraction = Some(rep);
        Model::Three(a)
    } else {
        doc.model.clone()
    };

    let engine = args.engine.unwrap_or(match model {
        Model::Concrete(_) => Engine::Direct2,
        Model::Three(_) => Engine::Direct3,
    });
    let start = Instant::now();
    let (verdict, engine_name) = match engine {
        Engine::Direct2 => match &model {
            Model::Concrete(g) => (TruthValue::from_bool(check2(g, &phi, &cfg)?), "direct2"),
            Model::Three(_) => {
                return Err(Error::Validation("the direct2 engine needs a concrete model".into()))
            }
        },
        Engine::Direct3 => (check3(&model.to_three(), &phi, &cfg)?, "direct3"),
        Engine::Split => (check_split(&model.to_three(), &phi, &cfg)?, "split"),
    };
    let report = RunReport {
        verdict,
        engine: engine_name.to_string(),
        formula: phi.to_string(),
        model: source,
        abstraction_time,
        verification_time: start.elapsed(),
        abstraction,
    };
    match args.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialise")),
    }
    Ok(exit_code(verdict))
}

fn gen_scheduler_cmd(args: GenSchedulerArgs) -> Result<(), Error> {
    let (g, part, phi) = gen_scheduler_with(args.n, args.partition.into())?;
    let doc = ModelDocument {
        partition: Some(part.names(&g)),
        model: Model::Concrete(g),
        formula: Some(phi.to_string()),
    };
    println!("{}", doc.to_json());
    Ok(())
}

fn gen_formulas(args: GenFormulasArgs) -> Result<(), Error> {
    if args.min_depth == 0 || args.min_depth > args.max_depth {
        return Err(Error::Validation("depths must satisfy 1 <= min-depth <= max-depth".into()));
    }
    let (agents, atoms) = match &args.model {
        Some(path) => {
            let (bytes, _) = read_input(Some(path))?;
            let g = load_document(&bytes)?.model.to_three();
            (g.agents().to_vec(), g.atoms().to_vec())
        }
        None => (args.agents.clone(), args.atoms.clone().unwrap_or_else(|| atom_names(2))),
    };
    if atoms.is_empty() {
        return Err(Error::Validation("random formulas need at least one atom".into()));
    }
    let span = args.max_depth - args.min_depth + 1;
    for i in 0..args.count {
        let depth = args.min_depth + i % span;
        println!("{}", gen_random_formula(args.seed.wrapping_add(i as u64), depth, &agents, &atoms));
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), Error> {
    if args.from < 2 || args.from > args.to {
        return Err(Error::Validation("the range must satisfy 2 <= from <= to".into()));
    }
    let cfg = args.settings.config();
    let rows = compression_table(args.from..=args.to, args.partition.into(), &cfg)?;
    let defined = match args.definedness {
        Some(count) => {
            let cfg = Config { budget: args.formula_budget, ..cfg.clone() };
            Some(definedness(args.definedness_n, count, 2..=5, args.seed, &cfg)?)
        }
        None => None,
    };
    match args.format {
        Format::Text => {
            print!("{}", compression_text(&rows));
            if let Some(d) = &defined {
                println!();
                print!("{}", d.to_text());
            }
        }
        Format::Json => {
            let out = serde_json::json!({ "compression": rows, "definedness": defined });
            println!("{}", serde_json::to_string_pretty(&out).expect("reports serialise"));
        }
    }
    Ok(())
}
