fn main() {
    std::process::exit(pdn::cli::main_with(std::env::args_os()));
}
