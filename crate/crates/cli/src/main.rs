fn main() {
    std::process::exit(tepwp_cli::run(std::env::args_os()));
}
