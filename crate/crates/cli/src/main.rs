use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches};
use serde::de::DeserializeOwned;
use serde::Serialize;

use chaosig_cli::args::{Cli, Command};
use chaosig_cli::{commands, config, reproduce, CliError, CliResult, EXIT_NUMERICAL};

fn with_config<T>(args: T, path: &Option<PathBuf>, matches: &ArgMatches) -> CliResult<T>
where
    T: Serialize + DeserializeOwned,
{
    match path {
        None => Ok(args),
        Some(path) => {
            let value = config::load(path)?;
            config::merge(&args, &value, matches)
        }
    }
}

fn run(command: Command, matches: &ArgMatches) -> CliResult<()> {
    match command {
        Command::Bifurcation(a) => {
            let path = a.config.clone();
            commands::bifurcation(&with_config(a, &path, matches)?)
        }
        Command::Bounds(a) => {
            let path = a.config.clone();
            commands::bounds(&with_config(a, &path, matches)?)
        }
        Command::Generate(a) => {
            let path = a.config.clone();
            commands::generate(&with_config(a, &path, matches)?)
        }
        Command::Train(a) => {
            let path = a.config.clone();
            commands::train(&with_config(a, &path, matches)?)
        }
        Command::Diagnose(a) => {
            let path = a.config.clone();
            commands::diagnose_cmd(&with_config(a, &path, matches)?)
        }
        Command::SweepSigma(a) => {
            let path = a.config.clone();
            commands::sweep_sigma(&with_config(a, &path, matches)?)
        }
        Command::ReproducePaper(a) => {
            let path = a.config.clone();
            let summary = reproduce::reproduce(&with_config(a, &path, matches)?)?;
            if summary.all_pass {
                Ok(())
            } else {
                let failed = summary.checks.iter().filter(|c| !c.pass).count();
                Err(CliError {
                    code: EXIT_NUMERICAL,
                    message: format!("{failed} of {} checks failed", summary.checks.len()),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let name = cli.command.name();
    let sub = matches
        .subcommand_matches(name)
        .expect("parsed subcommand has matches");
    match run(cli.command, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
