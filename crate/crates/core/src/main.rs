use clap::Parser;
use kaccoh::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            std::process::exit(outcome.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
