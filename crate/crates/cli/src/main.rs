fn main() {
    std::process::exit(mdepth_cli::run(std::env::args_os()));
}
