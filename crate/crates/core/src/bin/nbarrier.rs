fn main() {
    std::process::exit(nbarrier::cli::run(std::env::args_os()));
}
