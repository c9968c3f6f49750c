use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = nsp_cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    if out.flush().is_err() {
        return ExitCode::from(nsp_cli::EXIT_IO as u8);
    }
    ExitCode::from(code as u8)
}
