use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(restname::cli::main_entry())
}
