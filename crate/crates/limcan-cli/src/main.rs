use std::process::ExitCode;

use clap::Parser;
use limcan_cli::commands::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = commands::run(&cli);
    let text = serde_json::to_string_pretty(&out.json).expect("JSON serializes") + "\n";
    if let Some(msg) = out.json["error"]["message"].as_str() {
        eprintln!("limcan: {msg}");
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("limcan: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(out.exit as u8)
}
