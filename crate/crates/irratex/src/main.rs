fn main() {
    std::process::exit(irratex::cli::run());
}
