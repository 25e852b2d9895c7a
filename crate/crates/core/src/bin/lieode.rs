fn main() {
    std::process::exit(lieode::cli::main_with_args(std::env::args_os()));
}
