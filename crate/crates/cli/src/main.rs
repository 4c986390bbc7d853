use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args_os()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let run = qmeas_cli::run(&argv);
    // Report first, then diagnostics, so the two streams never interleave.
    let _ = std::io::stdout().lock().write_all(&run.stdout);
    let _ = std::io::stdout().flush();
    let _ = std::io::stderr().lock().write_all(&run.stderr);
    ExitCode::from(run.code)
}
