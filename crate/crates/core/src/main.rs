fn main() {
    std::process::exit(conformalk::cli::run(std::env::args_os()));
}
