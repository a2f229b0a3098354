fn main() {
    std::process::exit(lfo_cli::run(std::env::args_os()));
}
