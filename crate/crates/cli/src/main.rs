use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = qes_cli::run_from(std::env::args_os());
    if !out.report.is_empty() {
        let mut stdout = std::io::stdout().lock();
        if stdout
            .write_all(out.report.as_bytes())
            .and_then(|_| stdout.flush())
            .is_err()
        {
            return ExitCode::from(qes_cli::EXIT_IO as u8);
        }
    }
    if let Some(msg) = &out.message {
        eprint!("{msg}");
        if !msg.ends_with('\n') {
            eprintln!();
        }
    }
    ExitCode::from(out.code as u8)
}
