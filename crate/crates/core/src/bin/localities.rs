fn main() {
    std::process::exit(localities::cli::main_with_args(std::env::args_os()));
}
