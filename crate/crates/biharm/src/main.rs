use clap::Parser;

fn main() {
    let config = biharm::cli::JobConfig::parse();
    match biharm::cli::run(&config) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(1);
        }
    }
}
