use clap::Parser;

use extender_cli::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("{}", e.render());
        std::process::exit(1);
    }
}
