fn main() {
    std::process::exit(remodel::cli::main_with(std::env::args_os()));
}
