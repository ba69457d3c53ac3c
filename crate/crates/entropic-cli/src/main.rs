use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entropic_cli::commands::{cmd_check, cmd_convergence, cmd_run};
use entropic_cli::config::{presets, ExperimentConfig};
use entropic_cli::CliError;

#[derive(Parser)]
#[command(name = "entropic", version, about = "Entropy-conservative split-form discretizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON file with experiment fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    fields: ExperimentConfig,
}

impl Common {
    fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let file = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        file.overlay(self.fields).resolve()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one experiment and write its diagnostics as CSV.
    Run(Common),
    /// Run a refinement study and report errors and observed orders.
    Convergence(Common),
    /// Sweep a flux condition over random state pairs.
    Check(Common),
    /// Print the built-in presets.
    ListPresets,
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(c) => {
            let cfg = c.resolve()?;
            let summary = cmd_run(&cfg)?;
            report(&cfg, &summary);
        }
        Command::Convergence(c) => {
            let cfg = c.resolve()?;
            let summary = cmd_convergence(&cfg)?;
            report(&cfg, &summary);
        }
        Command::Check(c) => {
            let cfg = c.resolve()?;
            let out = cmd_check(&cfg)?;
            if out.report.samples == 0 {
                eprintln!("warning: zero samples, the check passes vacuously");
            }
            let line = format!(
                "{}: max violation {:.3e}, max |residual| {:.3e} over {} samples (tolerance {:.0e})",
                out.report.condition, out.report.max_violation, out.report.max_abs, out.report.samples, out.tolerance
            );
            if !out.passed {
                return Err(CliError::Violation(line));
            }
            report(&cfg, &line);
        }
        Command::ListPresets => {
            for p in presets() {
                println!("{:<22} {}", p.name, p.description);
            }
        }
    }
    Ok(())
}

/// Summaries go to stderr when stdout carries the CSV.
fn report(cfg: &ExperimentConfig, line: &str) {
    if cfg.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are configuration errors; help and version are not.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
