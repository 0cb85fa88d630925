use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(citex_cli::dispatch(std::env::args_os()) as u8)
}
