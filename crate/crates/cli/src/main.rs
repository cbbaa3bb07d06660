use std::io::Write;

fn main() {
    let cwd = std::env::current_dir().unwrap_or_else(|_| ".".into());
    let run = fincat_cli::run_args(std::env::args_os(), &cwd);
    print!("{}", run.stdout);
    eprint!("{}", run.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(run.code);
}
