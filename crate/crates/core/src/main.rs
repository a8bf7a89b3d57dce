fn main() {
    std::process::exit(fibkit::cli::main_with_args(std::env::args_os()));
}
