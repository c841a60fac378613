use clap::Parser;
use entcool_harness::cli::{run, Cli};

fn main() {
    if let Err(e) = run(Cli::parse()) {
        println!("{}", e.to_record());
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
