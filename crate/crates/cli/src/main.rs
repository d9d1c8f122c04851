use std::io;

fn main() {
    let tol = std::env::var(qteleport::app::TOL_ENV).ok();
    let code = qteleport::run_cli(
        std::env::args_os(),
        tol.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
