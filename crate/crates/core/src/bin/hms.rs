fn main() {
    std::process::exit(hms::cli::main());
}
