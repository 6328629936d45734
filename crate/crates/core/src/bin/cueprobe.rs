fn main() {
    std::process::exit(cueprobe::cli::main_with_args(std::env::args_os()));
}
