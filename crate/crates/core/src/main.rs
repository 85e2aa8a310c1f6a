use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (status, out, err) = conreal::cli::run(std::env::args_os());
    std::io::stdout().write_all(out.as_bytes()).ok();
    std::io::stderr().write_all(err.as_bytes()).ok();
    ExitCode::from(status as u8)
}
