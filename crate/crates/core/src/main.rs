fn main() {
    std::process::exit(resolvent_decay::cli::run(std::env::args_os()));
}
