use std::io::Write;

fn main() {
    let env_seed = std::env::var(specdim::cli::SEED_ENV).ok();
    let out = specdim::cli::run(std::env::args_os(), env_seed.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
