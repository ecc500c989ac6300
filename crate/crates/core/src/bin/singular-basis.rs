fn main() {
    std::process::exit(singular_basis::cli::main_with_args(std::env::args_os()));
}
