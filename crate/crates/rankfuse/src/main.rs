use clap::Parser;

use rankfuse::cli::{self, Cli};

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    let run = cli::configure_threads().and_then(|()| cli::run(cli));
    if let Err(err) = run {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
