fn main() {
    std::process::exit(qgraf_cli::run(std::env::args_os()));
}
