fn main() {
    std::process::exit(fracdiff::cli::main());
}
