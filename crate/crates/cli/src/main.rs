fn main() {
    std::process::exit(ctclab_cli::run(std::env::args_os()));
}
