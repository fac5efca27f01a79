fn main() {
    std::process::exit(psc_cli::run(std::env::args_os()));
}
