fn main() {
    std::process::exit(clustersim_cli::run());
}
