fn main() {
    std::process::exit(unital_forge::cli::main_with(std::env::args_os()));
}
