fn main() {
    std::process::exit(apxhom::cli::run_main());
}
