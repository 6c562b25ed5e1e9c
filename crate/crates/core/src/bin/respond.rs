//! `respond <task> --config <file> [--threads n] [--out dir]`

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgMatches, Command};
use respond::io::{describe, run, ExperimentConfig, RunOptions, Task};

fn cli() -> Command {
    let mut cmd = Command::new("respond")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Green's functions, spectra and GBZ curves of the corner-perturbed Hatano-Nelson chain")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for task in Task::ALL {
        let help = describe(task);
        let about = help.lines().next().unwrap_or_default().to_string();
        cmd = cmd.subcommand(
            Command::new(task.as_str())
                .about(about)
                .after_help(help)
                .arg(
                    Arg::new("config")
                        .long("config")
                        .required(true)
                        .value_parser(value_parser!(PathBuf))
                        .help("JSON experiment config"),
                )
                .arg(
                    Arg::new("threads")
                        .long("threads")
                        .value_parser(value_parser!(usize))
                        .help("worker threads (falls back to RESPOND_THREADS)"),
                )
                .arg(
                    Arg::new("out")
                        .long("out")
                        .value_parser(value_parser!(PathBuf))
                        .help("output directory, overrides output_dir"),
                ),
        );
    }
    cmd
}

fn threads(m: &ArgMatches) -> Result<Option<usize>, String> {
    if let Some(n) = m.get_one::<usize>("threads") {
        return Ok(Some(*n));
    }
    match std::env::var("RESPOND_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("RESPOND_THREADS must be a positive integer, got `{v}`")),
        _ => Ok(None),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let task: Task = name.parse().expect("subcommands are task names");

    let config_error = |msg: String| {
        eprintln!("respond: {msg}");
        ExitCode::from(2)
    };
    let path = sub.get_one::<PathBuf>("config").expect("required");
    let mut config = match ExperimentConfig::load(path) {
        Ok(c) => c,
        Err(e) => return config_error(e.to_string()),
    };
    if config.task != task {
        log::warn!(
            "config task `{}` replaced by `{task}` from the command line",
            config.task
        );
        config.task = task;
    }
    let opts = match threads(sub) {
        Ok(threads) => RunOptions {
            threads,
            out_dir: sub.get_one::<PathBuf>("out").cloned(),
        },
        Err(msg) => return config_error(msg),
    };
    match run(&config, &opts) {
        Ok(m) => {
            let dir = opts.out_dir.unwrap_or(config.output_dir);
            println!("{}", dir.join(respond::io::run::MANIFEST_NAME).display());
            log::info!("{} files in {:.2} s", m.files.len(), m.wall_time);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("respond: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
