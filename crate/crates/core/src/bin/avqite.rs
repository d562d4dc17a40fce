fn main() {
    std::process::exit(avqite::cli::main());
}
