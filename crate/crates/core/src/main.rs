use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let result = moorecell::cli::run_command(&argv);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(result.render().as_bytes());
    let _ = out.flush();
    std::process::exit(result.exit_code);
}
