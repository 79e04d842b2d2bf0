use std::io::IsTerminal;
use std::process::ExitCode;

fn main() -> ExitCode {
    let color = std::env::var_os("ONTO_NO_COLOR").is_none() && std::io::stderr().is_terminal();
    let code = ontoeco::cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock(), color);
    ExitCode::from(code as u8)
}
