fn main() {
    std::process::exit(genconc::cli::run(std::env::args_os()));
}
