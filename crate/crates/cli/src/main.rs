use std::io::Write;

use clap::Parser;

fn main() {
    let cli = lagroc_cli::Cli::parse();
    let outcome = lagroc_cli::run(&cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.code);
}
