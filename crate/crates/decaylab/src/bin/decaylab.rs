fn main() {
    std::process::exit(decaylab::cli::run());
}
