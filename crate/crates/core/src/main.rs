fn main() {
    let code = topofilt::cli::run(std::env::args_os());
    std::process::exit(code);
}
