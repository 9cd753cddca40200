fn main() {
    std::process::exit(cycpat_cli::main_with_args(std::env::args_os()));
}
