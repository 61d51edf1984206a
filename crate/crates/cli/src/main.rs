use std::io::Write;

use clap::Parser;
use gp_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let text = format!("{}\n", outcome.text);
    match &outcome.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("gp: cannot write {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => {
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
        }
    }
    std::process::exit(outcome.code);
}
