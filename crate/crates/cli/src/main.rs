fn main() {
    std::process::exit(thurston_cli::run(std::env::args_os()));
}
