use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(gsfock::cli::run())
}
