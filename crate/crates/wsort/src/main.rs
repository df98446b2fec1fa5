fn main() {
    std::process::exit(wsort::cli::run(std::env::args_os()));
}
