use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_tol = std::env::var(varreg::cli::TOL_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = varreg::cli::run(
        std::env::args_os(),
        env_tol.as_deref(),
        &mut varreg::cli::Io {
            stdout: &mut out,
            stderr: &mut err,
        },
    );
    let _ = out.flush();
    ExitCode::from(code as u8)
}
