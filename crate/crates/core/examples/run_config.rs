//! Runs a JSON experiment config, as the CLI does, and lists the artifacts.
//!
//! `cargo run --release --example run_config -- crates/core/configs/fig2.json [out-dir]`

use std::path::PathBuf;

use respond::io::{run, ExperimentConfig, RunOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(
        args.next()
            .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/fig2.json").into()),
    );
    let config = ExperimentConfig::load(&path).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2)
    });
    let opts = RunOptions {
        threads: None,
        out_dir: Some(
            args.next()
                .map(PathBuf::from)
                .unwrap_or_else(|| std::env::temp_dir().join("respond-example")),
        ),
    };
    match run(&config, &opts) {
        Ok(m) => {
            println!("{} ({}) in {:.2} s", m.name, m.task, m.wall_time);
            for f in &m.files {
                println!("  {:24} {:5} rows  {}", f.path, f.rows, &f.sha256[..16]);
            }
            println!("summary: {}", serde_json::to_string(&m.summary).unwrap());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
