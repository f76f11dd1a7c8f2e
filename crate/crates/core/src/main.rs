fn main() {
    std::process::exit(curvint::cli::run());
}
