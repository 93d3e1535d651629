fn main() {
    std::process::exit(rinehart_cli::app::main_with_args(std::env::args_os()));
}
