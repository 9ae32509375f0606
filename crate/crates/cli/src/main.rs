fn main() {
    std::process::exit(binedge_cli::cli_main(std::env::args_os()));
}
