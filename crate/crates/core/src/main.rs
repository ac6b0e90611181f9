fn main() {
    let code = maglayer::cli::run(std::env::args_os());
    std::process::exit(code);
}
