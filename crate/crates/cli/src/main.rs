use clap::Parser;
use hodge_spectra_cli::{commands::run, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}
