fn main() {
    std::process::exit(subgradient_lab::cli::main());
}
