fn main() {
    std::process::exit(qnetbound::cli::run());
}
