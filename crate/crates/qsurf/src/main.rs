fn main() { std::process::exit(qsurf::cli::run(std::env::args_os())) }
