use clap::Parser;
use nearfield_cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
