use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hopf_galois::perm_groups::DEFAULT_ENUMERATION_BOUND;
use hopf_galois::scenarios::{
    describe_structure, enumerate_text, list_fixtures, list_scenarios, run_scenario, OutputFormat, Scenario,
    ScenarioError, ENUM_BOUND_VAR,
};
use hopf_galois::Exec;

/// Hopf-Galois structures, associated orders and freeness checks.
#[derive(Parser)]
#[command(name = "hgs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or builtin scenario and report the checks.
    Run {
        scenario: String,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write a markdown summary.
        #[arg(long)]
        markdown: Option<PathBuf>,
        /// Run on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// List builtin fixtures.
    ListFixtures,
    /// List builtin scenarios.
    ListScenarios,
    /// Describe one Hopf-Galois structure of a fixture.
    Describe { fixture: String, index: usize },
    /// List the Hopf-Galois structures of a fixture.
    Enumerate {
        fixture: String,
        #[arg(long)]
        commutative_only: bool,
    },
}

fn enum_bound() -> Result<usize, ScenarioError> {
    match std::env::var(ENUM_BOUND_VAR) {
        Ok(v) => v.parse().ok().filter(|&b| b > 0).ok_or(ScenarioError::Invalid {
            field: ENUM_BOUND_VAR.into(),
            reason: "expected a positive integer".into(),
        }),
        Err(_) => Ok(DEFAULT_ENUMERATION_BOUND),
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), ScenarioError> {
    std::fs::write(path, text)
        .map_err(|e| ScenarioError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn run(cli: Cli) -> Result<u8, ScenarioError> {
    match cli.command {
        Command::Run { scenario, report, markdown, sequential } => {
            let (mut sc, base) = Scenario::load(&scenario)?;
            sc.apply_env()?;
            let exec = if sequential { Exec::Sequential } else { Exec::default() };
            let r = run_scenario(&sc, base.as_deref(), exec)?;
            for c in &r.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                match &c.error {
                    Some(e) => eprintln!("[{tag}] {}: {e}", c.name),
                    None => eprintln!("[{tag}] {}", c.name),
                }
            }
            match report {
                Some(path) => write(&path, &r.to_json())?,
                None if sc.format == OutputFormat::Markdown && markdown.is_none() => print!("{}", r.to_markdown()),
                None => print!("{}", r.to_json()),
            }
            if let Some(path) = markdown {
                write(&path, &r.to_markdown())?;
            }
            Ok(r.exit_code() as u8)
        }
        Command::ListFixtures => {
            print!("{}", list_fixtures());
            Ok(0)
        }
        Command::ListScenarios => {
            print!("{}", list_scenarios());
            Ok(0)
        }
        Command::Describe { fixture, index } => {
            print!("{}", describe_structure(&fixture, index, enum_bound()?)?);
            Ok(0)
        }
        Command::Enumerate { fixture, commutative_only } => {
            print!("{}", enumerate_text(&fixture, commutative_only, enum_bound()?)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
