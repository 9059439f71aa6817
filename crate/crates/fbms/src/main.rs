fn main() {
    std::process::exit(fbms::cli::run(std::env::args_os()));
}
