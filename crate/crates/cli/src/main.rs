fn main() {
    std::process::exit(relengine_cli::run(std::env::args_os()));
}
