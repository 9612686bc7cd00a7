use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // Unlocked handles: worker threads log to stderr while a command runs.
    let mut stdout = std::io::stdout();
    let code = secure_isac::cli::run(std::env::args_os(), &mut stdout, &mut std::io::stderr());
    let _ = stdout.flush();
    std::process::exit(code);
}
