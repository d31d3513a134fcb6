fn main() {
    std::process::exit(orbidisc_cli::run());
}
