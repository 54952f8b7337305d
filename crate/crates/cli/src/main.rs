fn main() {
    std::process::exit(qalb_cli::run(std::env::args_os()));
}
