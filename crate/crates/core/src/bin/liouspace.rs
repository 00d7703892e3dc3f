fn main() {
    std::process::exit(liouspace::cli::run(std::env::args_os()));
}
