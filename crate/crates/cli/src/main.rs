fn main() {
    std::process::exit(jobswitch_cli::main_with(std::env::args_os()));
}
