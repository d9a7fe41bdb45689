fn main() {
    std::process::exit(aggrlim::cli::run());
}
