fn main() {
    std::process::exit(adelia::cli::main_with_args(std::env::args_os()));
}
