use std::process::ExitCode;

fn main() -> ExitCode {
    holocomp::cli::main_with_args(std::env::args_os())
}
