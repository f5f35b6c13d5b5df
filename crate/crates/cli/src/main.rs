use std::process::ExitCode;

fn main() -> ExitCode {
    teleport_cli::main_with(std::env::args_os())
}
