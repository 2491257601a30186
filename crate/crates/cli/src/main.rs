fn main() {
    std::process::exit(tempered_cli::run(std::env::args_os()));
}
