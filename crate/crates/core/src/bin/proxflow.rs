fn main() {
    std::process::exit(proxflow::cli::main_with(std::env::args_os()));
}
