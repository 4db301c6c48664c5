use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, output) = intersector::versuite::cli::run_cli(std::env::args_os());
    println!("{output}");
    ExitCode::from(code as u8)
}
