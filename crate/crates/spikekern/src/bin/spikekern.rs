fn main() {
    let code = spikekern::cli::run_cli(std::env::args());
    std::process::exit(code);
}
