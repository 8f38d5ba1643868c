use std::process::ExitCode;

use clap::Parser;
use census_cli::{run, Cli, PipelineConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = PipelineConfig::from_options(&cli.options).and_then(|cfg| run(&cli.command, cfg));
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
