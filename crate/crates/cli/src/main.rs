fn main() {
    std::process::exit(nslab_cli::run(std::env::args_os()));
}
