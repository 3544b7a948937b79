use clap::Parser;

fn main() {
    std::process::exit(hpl_verify::cli::run(hpl_verify::cli::Cli::parse()));
}
