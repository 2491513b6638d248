fn main() {
    std::process::exit(frustration::cli::main_with_args(std::env::args_os()));
}
