fn main() { std::process::exit(d2dsim::cli::cli_main()); }
