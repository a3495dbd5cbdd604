fn main() {
    std::process::exit(szego_lab::cli::run(std::env::args_os()));
}
