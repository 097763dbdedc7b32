fn main() {
    std::process::exit(uniton::cli::main_with(std::env::args_os()));
}
