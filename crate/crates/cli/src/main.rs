fn main() {
    std::process::exit(kropina_cli::cli::main_with_stdio());
}
