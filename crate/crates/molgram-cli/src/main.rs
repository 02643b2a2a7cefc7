//! Command-line front end for the molgram pipeline.

mod config;
mod dataset;
mod pipeline;

use clap::Parser;

use crate::config::{resolve_config, Cli};
use crate::pipeline::{run_pipeline, StageError};

fn main() {
    let cli = Cli::parse();
    let result = resolve_config(&cli)
        .map_err(|e| StageError {
            stage: "config",
            message: e.to_string(),
        })
        .and_then(|config| run_pipeline(&config));
    if let Err(e) = result {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
