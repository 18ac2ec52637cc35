fn main() {
    std::process::exit(vicfluor::cli::main_with_args(std::env::args_os()));
}
