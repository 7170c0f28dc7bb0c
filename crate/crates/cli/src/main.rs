use clap::Parser;
use cwf_cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CWF_LOG")).init();
    let cli = Cli::parse();
    let status = run(&cli, &mut std::io::stdout().lock());
    std::process::exit(status.code());
}
