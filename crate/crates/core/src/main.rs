fn main() {
    std::process::exit(quasihelix::cli::run(std::env::args_os()));
}
