fn main() {
    std::process::exit(p3c_core::cli::run(std::env::args_os()));
}
