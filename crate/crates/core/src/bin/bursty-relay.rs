fn main() {
    std::process::exit(bursty_relay::cli::run(std::env::args_os()));
}
