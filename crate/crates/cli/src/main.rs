fn main() {
    std::process::exit(nidsbench_cli::run_command(std::env::args_os()));
}
