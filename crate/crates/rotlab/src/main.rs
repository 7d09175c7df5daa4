use std::process::ExitCode;

fn main() -> ExitCode {
    rotlab_harness::configure_workers();
    let code = rotlab_harness::cli::execute(std::env::args_os(), &mut std::io::stdout().lock());
    ExitCode::from(code)
}
