fn main() {
    std::process::exit(qwrca_cli::cli::main_with(std::env::args_os()));
}
