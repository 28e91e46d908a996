use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qml_cli::run(std::env::args_os()))
}
