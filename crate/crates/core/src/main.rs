use clap::Parser;
use phaselag::cli;

fn main() {
    let args = cli::Cli::parse();
    std::process::exit(cli::run(args));
}
