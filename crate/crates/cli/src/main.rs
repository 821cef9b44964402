use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qfa_cli::run(std::env::args_os()))
}
