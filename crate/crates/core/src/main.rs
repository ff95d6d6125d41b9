fn main() {
    std::process::exit(pimodulo::cli::main());
}
