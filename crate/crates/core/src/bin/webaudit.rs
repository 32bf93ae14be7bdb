fn main() {
    let code = webaudit::cli::run(std::env::args_os());
    std::process::exit(code);
}
