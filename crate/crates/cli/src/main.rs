use std::io::Write;

fn main() {
    let budget = std::env::var("MSO_BUDGET").ok();
    let out = mso_cli::run(std::env::args_os(), budget.as_deref());
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
