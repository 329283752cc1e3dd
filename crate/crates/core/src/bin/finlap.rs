fn main() {
    std::process::exit(finlap::cli::main_with_args(std::env::args_os()));
}
