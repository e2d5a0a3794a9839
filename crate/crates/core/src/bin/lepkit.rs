fn main() {
    std::process::exit(lepkit::cli::cli_main(std::env::args_os()));
}
