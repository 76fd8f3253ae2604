use std::io::{stderr, stdin, stdout, Write};

fn main() {
    let code = ijobstruct::cli::run(
        std::env::args_os(),
        &mut stdin().lock(),
        &mut stdout().lock(),
        &mut stderr().lock(),
    );
    let _ = stdout().flush();
    std::process::exit(code);
}
