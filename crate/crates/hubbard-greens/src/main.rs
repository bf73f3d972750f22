use clap::Parser;

fn main() {
    let cli = hubbard_greens::cli::Cli::parse();
    std::process::exit(hubbard_greens::cli::run(cli));
}
