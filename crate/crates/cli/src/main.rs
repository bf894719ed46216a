fn main() {
    std::process::exit(fspl_cli::run(std::env::args_os()));
}
