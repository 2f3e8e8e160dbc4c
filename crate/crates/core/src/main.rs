use std::io::Write;

use omt_core::cli::report::Color;
use omt_core::cli::run_command;

fn main() {
    let out = run_command(std::env::args_os(), Color::from_env());
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
