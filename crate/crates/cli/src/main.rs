mod args;
mod commands;
mod error;
mod input;
mod manifest;
mod render;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};
use error::CliError;
use manifest::{InputLog, RunManifest};

#[derive(Serialize)]
struct Envelope<'a> {
    manifest: RunManifest,
    report: &'a serde_json::Value,
}

fn run(cli: &Cli, start: Instant) -> Result<String, CliError> {
    let mut log = InputLog::default();
    let (name, json, out) = match &cli.command {
        Command::Spectrum(a) => ("spectrum", a.out.json, commands::spectrum(a, &mut log)?),
        Command::CheckPartition(a) => ("check-partition", a.out.json, commands::check_partition(a, &mut log)?),
        Command::FindPerfect(a) => ("find-perfect", a.out.json, commands::find_perfect(a, &mut log)?),
        Command::Scan(a) => ("scan", a.out.json, commands::scan(a, &mut log)?),
        Command::Conditions(a) => ("conditions", a.out.json, commands::conditions(a, &mut log)?),
        Command::DihedralDemo(a) => ("dihedral-demo", a.out.json, commands::dihedral(a, &mut log)?),
    };
    if !json {
        return Ok(out.text);
    }
    let manifest = RunManifest {
        command: name.to_string(),
        arguments: std::env::args().skip(1).collect(),
        input_digests: log.into_digests(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(serde_json::to_string_pretty(&Envelope { manifest, report: &out.report })? + "\n")
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    match run(&cli, start) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("eqpart: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
