use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cliffqm_cli::{bundle, export, output_dir, summary, sweep, CliError, Scenario, DEFAULT_OUTPUT_ROOT, OUTPUT_ROOT_ENV};

#[derive(Parser)]
#[command(name = "cliffqm", version, about = "Clifford-algebra Schrodinger/Pauli scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario and write fields.csv, trajectories.csv and report.json.
    Run {
        /// Scenario file, or the name of a bundled scenario.
        config: PathBuf,
        /// Output directory (default: <output root>/<scenario name>).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = OUTPUT_ROOT_ENV, default_value = DEFAULT_OUTPUT_ROOT)]
        root: PathBuf,
    },
    /// Run a scenario at successive halvings of h and report convergence slopes.
    Sweep {
        config: PathBuf,
        #[arg(long, default_value_t = sweep::MIN_LEVELS)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = OUTPUT_ROOT_ENV, default_value = DEFAULT_OUTPUT_ROOT)]
        root: PathBuf,
    },
    /// List bundled scenarios.
    List {
        #[arg(long)]
        json: bool,
        /// Scenario directory (default: the bundled one).
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run { config, out, root } => {
            let scenario = Scenario::load(&bundle::resolve(&config, &bundle::default_dir())?)?;
            let result = cliffqm_cli::execute(&scenario)?;
            let dir = output_dir(&scenario, out.as_deref(), Some(&root));
            export(&result, &dir, &[])?;
            for line in summary(&result.report) {
                println!("{line}");
            }
            println!("wrote {}", dir.display());
            Ok(result.report.pass)
        }
        Command::Sweep { config, levels, out, root } => {
            let scenario = Scenario::load(&bundle::resolve(&config, &bundle::default_dir())?)?;
            let result = sweep::sweep(&scenario, levels)?;
            let table = result.report.sweep.as_ref().map(sweep::sweep_csv).unwrap_or_default();
            let dir = output_dir(&scenario, out.as_deref(), Some(&root));
            export(&result, &dir, &[("sweep.csv", table)])?;
            for line in summary(&result.report) {
                println!("{line}");
            }
            println!("wrote {}", dir.display());
            Ok(result.report.pass)
        }
        Command::List { json, dir } => {
            let entries = bundle::list(&dir.unwrap_or_else(bundle::default_dir))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&entries).expect("entries serialise"));
            } else {
                for e in &entries {
                    println!("{:<24} {}", e.name, e.description);
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
