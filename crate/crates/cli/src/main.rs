use floer_cli::run::{main_with, OUT_DIR_ENV};

fn main() {
    let out_dir = std::env::var_os(OUT_DIR_ENV).map(Into::into);
    let code = main_with(std::env::args().collect(), out_dir, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
