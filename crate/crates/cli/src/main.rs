fn main() {
    std::process::exit(fracvar_cli::run(std::env::args_os()));
}
