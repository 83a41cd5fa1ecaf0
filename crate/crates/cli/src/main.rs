fn main() {
    std::process::exit(tropfm_cli::run(std::env::args_os()));
}
