fn main() {
    std::process::exit(bce_cli::run(std::env::args_os()));
}
