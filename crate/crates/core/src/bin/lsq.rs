use clap::Parser;

fn main() {
    let cli = lsq::cli::Cli::parse();
    let r = lsq::cli::run(cli);
    if let Err(e) = &r {
        eprintln!("error: {e}");
    }
    std::process::exit(lsq::cli::exit_code(&r));
}
