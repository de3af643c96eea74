fn main() {
    std::process::exit(cyclodet::cli::run(std::env::args_os()));
}
