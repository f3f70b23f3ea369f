fn main() {
    std::process::exit(topoperiod_cli::run(std::env::args_os()));
}
