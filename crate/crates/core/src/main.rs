use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = bundlechow::run_command(std::env::args_os());
    let written = if result.exit_code == 0 {
        std::io::stdout().write_all(result.payload.as_bytes())
    } else {
        std::io::stderr().write_all(result.payload.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(result.exit_code as u8)
}
