use std::io::{IsTerminal, Write};

fn main() {
    let color = dmplan_cli::use_color(
        std::env::var(dmplan_cli::COLOR_ENV).ok().as_deref(),
        std::io::stdout().is_terminal(),
    );
    let out = dmplan_cli::run(std::env::args_os(), color);
    let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
