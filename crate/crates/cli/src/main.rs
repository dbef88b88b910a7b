fn main() {
    std::process::exit(ctd_cli::run(std::env::args_os()));
}
