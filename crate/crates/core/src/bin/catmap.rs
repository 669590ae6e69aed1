fn main() {
    std::process::exit(catmap::experiments::cli::main_with_args(std::env::args_os()));
}
