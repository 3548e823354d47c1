fn main() {
    std::process::exit(heyde_lab::cli::run(std::env::args_os()));
}
