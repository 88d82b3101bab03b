use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(weakbound::cli::run(std::env::args_os()))
}
