fn main() {
    std::process::exit(qmarket_cli::run(std::env::args_os()));
}
