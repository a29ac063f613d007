fn main() {
    std::process::exit(vira::cli::run(std::env::args_os()));
}
