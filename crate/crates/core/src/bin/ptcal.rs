fn main() {
    std::process::exit(ptcal::cli::run(std::env::args_os()));
}
