fn main() {
    std::process::exit(speclab::cli::main_with_args(std::env::args_os()));
}
