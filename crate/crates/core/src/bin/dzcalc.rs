use clap::Parser;

fn main() {
    let args = depthzero::calc::cli::Args::parse();
    std::process::exit(depthzero::calc::cli::run(&args));
}
