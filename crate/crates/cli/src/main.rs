use clap::Parser;

fn main() {
    let cli = tamesym_cli::Cli::parse();
    std::process::exit(tamesym_cli::execute(&cli));
}
