use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SC_LOG_LEVEL", "warn"))
        .format_timestamp(None)
        .init();
    let cli = sc_cli::cli::Cli::parse();
    match sc_cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let (code, kind) = sc_cli::classify(&err);
            eprintln!("error[{kind}]: {err}");
            std::process::exit(code);
        }
    }
}
