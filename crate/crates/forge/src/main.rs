fn main() {
    std::process::exit(girt_forge::cli::main_with_args(std::env::args_os()));
}
