fn main() {
    std::process::exit(superplane_core::cli::run(std::env::args_os()));
}
