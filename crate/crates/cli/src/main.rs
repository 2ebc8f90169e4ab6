fn main() {
    std::process::exit(despeckle_cli::main_with_args(std::env::args_os()));
}
