use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dwlan_cli::presets::{preset, PRESET_NAMES};
use dwlan_cli::{run_experiment, validate_config, CliError, ExperimentSpec, OutputFormat};

#[derive(Parser, Debug)]
#[command(name = "dwlan", version, about = "Deterministic WLAN experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment from a config file or a preset.
    Run {
        /// TOML experiment file.
        #[arg(short, long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in figure preset.
        #[arg(short, long)]
        preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Trials per simulated sweep point.
        #[arg(long)]
        trials: Option<i64>,
        /// Directory for the result file (default: config, then $DWLAN_OUTPUT_DIR, then ./results).
        #[arg(short, long)]
        output_dir: Option<PathBuf>,
        #[arg(short, long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Check a config file and list every violation.
    Validate { config: PathBuf },
    /// List the figure presets and their expected headline numbers.
    Presets,
}

fn load(config: Option<PathBuf>, preset_name: Option<String>) -> Result<ExperimentSpec, CliError> {
    match (config, preset_name) {
        (Some(path), _) => ExperimentSpec::load(&path),
        (None, Some(name)) => Ok(ExperimentSpec::from_preset(&name)),
        (None, None) => Err(CliError::Parse {
            origin: "command line".into(),
            message: "give --config or --preset".into(),
        }),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            preset,
            seed,
            trials,
            output_dir,
            format,
        } => {
            let mut spec = load(config, preset)?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(t) = trials {
                spec.trials = t;
            }
            if let Some(f) = format {
                spec.format = f;
            }
            let path = run_experiment(&spec, output_dir.as_deref())?;
            println!("{}", path.display());
        }
        Command::Validate { config } => {
            let spec = ExperimentSpec::load(&config)?;
            let violations = validate_config(&spec);
            if !violations.is_empty() {
                return Err(CliError::Invalid(violations));
            }
            println!("{}: ok", config.display());
        }
        Command::Presets => {
            for name in PRESET_NAMES {
                let p = preset(name).expect("listed presets exist");
                println!("{name:7} {}\n        expected: {}", p.description, p.headline);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
