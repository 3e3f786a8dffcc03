use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nq_cli::harness::{all_passed, verify_paper, HarnessOptions};
use nq_cli::job::{self, parse_bytes, parse_duration, Exit, Failure, Query, RunOptions};
use nq_core::document::ResultDocument;
use nq_core::nq::InstanceStrategy;

const TIME_BUDGET_VAR: &str = "NQ_TIME_BUDGET";
const MEM_BUDGET_VAR: &str = "NQ_MEM_BUDGET";

#[derive(Parser)]
#[command(
    name = "nq",
    version,
    about = "Nilpotent quotients of finitely presented groups with identical relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a nilpotent quotient and write its result document.
    Run {
        file: PathBuf,
        #[arg(long)]
        max_class: Option<usize>,
        /// generators, generators_plus_pairs or weighted_box
        #[arg(long, default_value = "weighted_box")]
        strategy: String,
        /// Random law instances checked after the computation.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Wall-clock limit such as 90s, 15m or 2h [env: NQ_TIME_BUDGET].
        #[arg(long)]
        time_budget: Option<String>,
        /// Resident memory limit such as 512M or 8G [env: NQ_MEM_BUDGET].
        #[arg(long)]
        mem_budget: Option<String>,
        /// Defaults to the input path with extension `.result.json`.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Kill the torsion of every layer.
        #[arg(long)]
        torsion_free: bool,
        /// Keep the initial strategy even when a sampled law instance fails.
        #[arg(long)]
        no_escalate: bool,
        /// Record per-class timings in the document.
        #[arg(long)]
        timings: bool,
    },
    /// Answer a question about a result document.
    ///
    /// order <word> | in-gamma <word> <k> | exponent-gamma <k> | torsion |
    /// compare [--torsion-free] <other-result>
    Query {
        result: PathBuf,
        #[arg(required = true, num_args = 1.., trailing_var_arg = true, allow_hyphen_values = true)]
        command: Vec<String>,
    },
    /// Recompute every published value and print expected against computed.
    VerifyPaper {
        /// Also run the class-8 computation for two right 4-Engel elements.
        #[arg(long)]
        include_long: bool,
        /// Keep result documents here; an interrupted long run resumes from them.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn budget<T>(
    flag: Option<String>,
    var: &str,
    parse: fn(&str) -> Result<T, String>,
) -> Result<Option<T>, Failure> {
    let text = match flag {
        Some(t) => Some(t),
        None => std::env::var(var).ok().filter(|v| !v.trim().is_empty()),
    };
    text.map(|t| parse(&t)).transpose().map_err(|e| Failure {
        exit: Exit::Input,
        message: e,
    })
}

fn execute(cli: Cli) -> Result<Exit, Failure> {
    match cli.command {
        Command::Run {
            file,
            max_class,
            strategy,
            samples,
            seed,
            time_budget,
            mem_budget,
            output,
            torsion_free,
            no_escalate,
            timings,
        } => {
            let mut opts = RunOptions::new(file);
            opts.max_class = max_class;
            opts.strategy = InstanceStrategy::from_name(&strategy).ok_or_else(|| Failure {
                exit: Exit::Input,
                message: format!("unknown strategy `{}`", strategy),
            })?;
            opts.samples = samples;
            opts.seed = seed;
            opts.time_budget = budget(time_budget, TIME_BUDGET_VAR, parse_duration)?;
            opts.memory_budget = budget(mem_budget, MEM_BUDGET_VAR, parse_bytes)?;
            opts.output = output;
            opts.torsion_free = torsion_free;
            opts.escalate = !no_escalate;
            opts.timings = timings;
            let outcome = job::run(&opts)?;
            print!("{}", outcome.report);
            Ok(outcome.exit)
        }
        Command::Query { result, command } => {
            let q = Query::parse(&command)?;
            let doc = ResultDocument::read(&result)?;
            print!("{}", job::query(&doc, &q)?);
            Ok(Exit::Ok)
        }
        Command::VerifyPaper {
            include_long,
            output,
        } => {
            let opts = HarnessOptions {
                include_long,
                output,
            };
            let rows = verify_paper(&opts, |row| print!("{}", row.render()));
            Ok(if all_passed(&rows) {
                Exit::Ok
            } else {
                Exit::Verification
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.exit as u8)
        }
    }
}
