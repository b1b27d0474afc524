//! Thin binary wrapper; all behavior lives in the library crate.

fn main() {
    std::process::exit(pinc_cli::run(std::env::args_os()));
}
