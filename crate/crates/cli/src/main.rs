use clap::Parser;

fn main() {
    let cli = dngame_cli::Cli::parse();
    let code = dngame_cli::execute(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
