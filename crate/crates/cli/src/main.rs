use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gamp_cli::{run_tasks, Report, Scenario, TaskSpec};

#[derive(Parser)]
#[command(name = "gamp", version, about = "Exact checks and solvers for formal G-amplitudes")]
struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task listed in the scenario.
    Run,
    /// Run every task and always print JSON.
    Report,
    /// Identity checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Order-by-order solvers.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Twisted cohomology dimension in a finite window.
    Cohomology {
        #[arg(long)]
        xi_degree: usize,
        #[arg(long)]
        cochain_degree: usize,
        #[arg(long)]
        x_degree: u32,
        /// Twisting MC element; defaults to the unit cochain.
        #[arg(long)]
        p0: Option<String>,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// d∘d = 0, Leibniz and associativity on the scenario's cochains.
    Dga,
    /// The MC residual of a degree-1 cochain.
    Mc { cochain: String },
    /// The operator composition law of a degree-1 cochain.
    Representation { cochain: String },
    /// Cocycle identities.
    Cocycle(CocycleArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CocycleArgs {
    /// ξ-free multiplicative cocycle (a cochain name).
    #[arg(long)]
    multiplicative: Option<String>,
    /// Additive phase cocycle (a phase table name).
    #[arg(long)]
    additive: Option<String>,
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Extend P⁰ + ħP¹ to an MC element.
    Mc {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        p0: Option<String>,
        #[arg(long)]
        p1: String,
    },
    /// Gauge an MC element back to its leading term.
    Rigidity {
        #[arg(long)]
        order: usize,
        #[arg(long, conflicts_with = "p1", required_unless_present = "p1")]
        cochain: Option<String>,
        #[arg(long)]
        p1: Option<String>,
    },
}

fn task_of(cmd: Command) -> Option<TaskSpec> {
    Some(match cmd {
        Command::Run | Command::Report => return None,
        Command::Check(c) => match c {
            CheckCommand::Dga => TaskSpec::CheckDga,
            CheckCommand::Mc { cochain } => TaskSpec::CheckMc { cochain },
            CheckCommand::Representation { cochain } => TaskSpec::Representation { cochain },
            CheckCommand::Cocycle(CocycleArgs {
                multiplicative: Some(cochain),
                ..
            }) => TaskSpec::CocycleMultiplicative { cochain },
            CheckCommand::Cocycle(CocycleArgs {
                additive: Some(phase), ..
            }) => TaskSpec::CocycleAdditive { phase },
            CheckCommand::Cocycle(_) => unreachable!("clap enforces one of the flags"),
        },
        Command::Solve(SolveCommand::Mc { order, p0, p1 }) => TaskSpec::SolveMc { p0, p1, order },
        Command::Solve(SolveCommand::Rigidity { order, cochain, p1 }) => {
            TaskSpec::SolveRigidity { cochain, p1, order }
        }
        Command::Cohomology {
            xi_degree,
            cochain_degree,
            x_degree,
            p0,
        } => TaskSpec::Cohomology {
            p0,
            xi_degree,
            cochain_degree,
            x_degree,
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = cli.scenario else {
        eprintln!("error: --scenario is required");
        return ExitCode::from(2);
    };
    let scenario = match Scenario::load(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let force_json = matches!(cli.command, Command::Report);
    let tasks = match task_of(cli.command) {
        Some(t) => {
            if let Err(e) = scenario.check_refs(&t, "command line") {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            vec![t]
        }
        None => scenario.tasks.clone(),
    };
    let report: Report = run_tasks(&scenario, &tasks);
    match (force_json, cli.format) {
        (true, _) | (_, Format::Json) => print!("{}", report.to_json()),
        (false, Format::Text) => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}
