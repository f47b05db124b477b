use std::process::ExitCode;

fn main() -> ExitCode {
    cochange::cli::run(std::env::args_os())
}
