use clap::Parser;

fn main() {
    let cli = ffhk_cli::Cli::parse();
    std::process::exit(ffhk_cli::run(&cli));
}
