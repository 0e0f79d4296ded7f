fn main() {
    std::process::exit(proxshift::cli::main_with_args(std::env::args_os()));
}
