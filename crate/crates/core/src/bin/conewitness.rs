use clap::Parser;
use conewitness::cli::{main_with, Cli};

fn main() {
    std::process::exit(main_with(Cli::parse()));
}
