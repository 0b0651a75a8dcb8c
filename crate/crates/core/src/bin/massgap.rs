fn main() {
    std::process::exit(massgap::cli::run(std::env::args_os()));
}
