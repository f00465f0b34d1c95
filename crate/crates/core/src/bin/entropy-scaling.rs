fn main() {
    std::process::exit(entropy_scaling::cli::main_with_args(std::env::args_os()));
}
