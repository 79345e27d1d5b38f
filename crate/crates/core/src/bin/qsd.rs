fn main() {
    std::process::exit(qscissors::cli::main_with_args(std::env::args_os()));
}
