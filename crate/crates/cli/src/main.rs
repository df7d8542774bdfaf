use clap::Parser;

fn main() {
    let cli = witcount_cli::Cli::parse();
    let code = witcount_cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
