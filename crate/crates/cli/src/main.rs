fn main() {
    let code = mucut_cli::run_with_io(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code);
}
