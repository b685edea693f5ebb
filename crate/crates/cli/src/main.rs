use std::process::ExitCode;

fn main() -> ExitCode {
    let env = std::env::var(revsynth_cli::MAX_N_ENV).ok();
    ExitCode::from(revsynth_cli::main_with(std::env::args(), env.as_deref()))
}
