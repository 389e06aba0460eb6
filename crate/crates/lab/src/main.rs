fn main() {
    let code = trp_lab::cli::run(std::env::args());
    std::process::exit(code);
}
