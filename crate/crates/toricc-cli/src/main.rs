fn main() {
    std::process::exit(toricc_cli::run(std::env::args_os()));
}
