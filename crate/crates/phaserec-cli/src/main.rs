use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phaserec_cli::{run_experiment, validate_config, CliError, Mode};

#[derive(Parser)]
#[command(
    name = "phaserec",
    about = "Wave-scattering workbench: forward simulation, phaseless data, and phase recovery",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the stdout summary.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the forward problem and report the scattering amplitude.
    Forward(RunArgs),
    /// Generate phaseless ray samples and recover the complex amplitude.
    Recover(RunArgs),
    /// Sweep grid resolutions and track the amplitude's convergence.
    Convergence(RunArgs),
    /// Reduce far point-source intensities to the plane-wave intensity.
    #[command(name = "resolvent-reduction")]
    ResolventReduction(RunArgs),
}

fn execute(command: Command) -> Result<(), CliError> {
    let (args, expected_mode) = match &command {
        Command::Forward(args) => (args, Mode::Forward),
        Command::Recover(args) => (args, Mode::Recover),
        Command::Convergence(args) => (args, Mode::Convergence),
        Command::ResolventReduction(args) => (args, Mode::ResolventReduction),
    };
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Validation(format!("reading {}: {e}", args.config.display()))
    })?;
    let config = validate_config(&text)?;
    if config.mode != expected_mode {
        return Err(CliError::Validation(format!(
            "config mode `{}` does not match the `{}` subcommand",
            config.mode.name(),
            expected_mode.name()
        )));
    }
    run_experiment(&config, args.out.as_deref(), args.quiet)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
