fn main() {
    std::process::exit(renyi_maxent::cli::main_with_args(std::env::args_os()));
}
