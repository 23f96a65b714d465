fn main() {
    std::process::exit(conekit::cli::run());
}
