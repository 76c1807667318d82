fn main() {
    std::process::exit(nare_adi::cli::run(std::env::args_os()));
}
